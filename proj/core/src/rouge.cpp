#include "highlight/rouge.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <vector>

#include "highlight/error.hpp"

namespace highlight {

RougeScore RougeScore::from_pr(double p, double r) {
    double f = (p + r > 0.0) ? 2.0 * p * r / (p + r) : 0.0;
    return {p, r, f};
}

std::string to_string(RougeMetric m) {
    switch (m) {
        case RougeMetric::Rouge1: return "ROUGE-1";
        case RougeMetric::Rouge2: return "ROUGE-2";
        case RougeMetric::RougeL: return "ROUGE-L";
    }
    return "?";
}

RougeMetric parse_rouge_metric(const std::string& name) {
    std::string s;
    for (char c : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (s.rfind("rouge-", 0) == 0) s = s.substr(6);
    if (s == "1") return RougeMetric::Rouge1;
    if (s == "2") return RougeMetric::Rouge2;
    if (s == "l") return RougeMetric::RougeL;
    throw Error("unknown ROUGE metric '" + name + "' (expected 1, 2 or L)");
}

namespace {

using NGram = std::vector<std::string_view>;

std::map<NGram, std::size_t> ngram_counts(std::span<const Token> tokens, std::size_t n) {
    std::map<NGram, std::size_t> counts;
    if (tokens.size() < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        NGram g;
        g.reserve(n);
        for (std::size_t k = 0; k < n; ++k) g.emplace_back(tokens[i + k]);
        ++counts[std::move(g)];
    }
    return counts;
}

}  // namespace

RougeScore rouge_n(std::span<const Token> candidate, std::span<const Token> reference, int n) {
    if (n < 1) throw Error("rouge_n: n must be at least 1, got " + std::to_string(n));
    const auto un = static_cast<std::size_t>(n);
    auto cand = ngram_counts(candidate, un);
    auto ref = ngram_counts(reference, un);

    std::size_t cand_total = candidate.size() >= un ? candidate.size() - un + 1 : 0;
    std::size_t ref_total = reference.size() >= un ? reference.size() - un + 1 : 0;
    std::size_t overlap = 0;
    for (const auto& [gram, count] : cand)
        if (auto it = ref.find(gram); it != ref.end()) overlap += std::min(count, it->second);

    double p = cand_total ? static_cast<double>(overlap) / static_cast<double>(cand_total) : 0.0;
    double r = ref_total ? static_cast<double>(overlap) / static_cast<double>(ref_total) : 0.0;
    return RougeScore::from_pr(p, r);
}

std::size_t lcs_length(std::span<const Token> a, std::span<const Token> b) {
    if (a.empty() || b.empty()) return 0;
    if (b.size() > a.size()) std::swap(a, b);
    // Two-row DP over the shorter sequence.
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j)
            cur[j] = (a[i - 1] == b[j - 1]) ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

RougeScore rouge_l(std::span<const Token> candidate, std::span<const Token> reference) {
    double lcs = static_cast<double>(lcs_length(candidate, reference));
    double p = candidate.empty() ? 0.0 : lcs / static_cast<double>(candidate.size());
    double r = reference.empty() ? 0.0 : lcs / static_cast<double>(reference.size());
    return RougeScore::from_pr(p, r);
}

RougeScore rouge(RougeMetric metric, std::span<const Token> candidate, std::span<const Token> reference) {
    switch (metric) {
        case RougeMetric::Rouge1: return rouge_n(candidate, reference, 1);
        case RougeMetric::Rouge2: return rouge_n(candidate, reference, 2);
        case RougeMetric::RougeL: return rouge_l(candidate, reference);
    }
    throw Error("unhandled ROUGE metric");
}

}  // namespace highlight
