#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "highlight/corpus.hpp"

namespace highlight {

struct RougeScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;

    // Harmonic mean of p and r, 0 when both are 0.
    static RougeScore from_pr(double p, double r);
};

enum class RougeMetric { Rouge1, Rouge2, RougeL };

std::string to_string(RougeMetric m);
// Accepts "1", "2", "L" (also "l", "rouge-1", ...). Throws on anything else.
RougeMetric parse_rouge_metric(const std::string& name);

// Clipped n-gram overlap. Throws when n < 1.
RougeScore rouge_n(std::span<const Token> candidate, std::span<const Token> reference, int n);

// Flat single-sequence LCS; not the summary-level union-LCS variant.
std::size_t lcs_length(std::span<const Token> a, std::span<const Token> b);
RougeScore rouge_l(std::span<const Token> candidate, std::span<const Token> reference);

RougeScore rouge(RougeMetric metric, std::span<const Token> candidate, std::span<const Token> reference);

}  // namespace highlight
