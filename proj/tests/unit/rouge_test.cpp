#include <gtest/gtest.h>

#include "highlight/error.hpp"
#include "highlight/rouge.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace highlight;

namespace {

TokenList split(const std::string& s) {
    TokenList out;
    std::string cur;
    for (char c : s) {
        if (c == ' ') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

void expect_f1_invariant(const RougeScore& s) {
    double expected = s.precision + s.recall > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    EXPECT_NEAR(s.f1, expected, 1e-12);
    for (double v : {s.precision, s.recall, s.f1}) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
    }
}

}  // namespace

TEST(RougeN, IdenticalSequences) {
    auto t = split("the cat sat on the mat");
    auto s = rouge_n(t, t, 1);
    EXPECT_DOUBLE_EQ(s.precision, 1.0);
    EXPECT_DOUBLE_EQ(s.recall, 1.0);
    EXPECT_DOUBLE_EQ(s.f1, 1.0);
}

TEST(RougeN, UnigramExample) {
    auto s = rouge_n(split("the cat sat"), split("the cat"), 1);
    EXPECT_NEAR(s.precision, 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(s.recall, 1.0, 1e-12);
    EXPECT_NEAR(s.f1, 0.8, 1e-12);
}

TEST(RougeN, BigramExample) {
    auto s = rouge_n(split("a b c"), split("a b d"), 2);
    EXPECT_NEAR(s.precision, 0.5, 1e-12);
    EXPECT_NEAR(s.recall, 0.5, 1e-12);
    EXPECT_NEAR(s.f1, 0.5, 1e-12);
}

TEST(RougeN, ClipsRepeatedTokens) {
    auto s = rouge_n(split("the the the the"), split("the cat"), 1);
    EXPECT_NEAR(s.precision, 0.25, 1e-12);
    EXPECT_NEAR(s.recall, 0.5, 1e-12);
}

TEST(RougeN, EmptyAndShortInputs) {
    auto s = rouge_n({}, split("a b"), 1);
    EXPECT_EQ(s.precision, 0.0);
    EXPECT_EQ(s.recall, 0.0);
    EXPECT_EQ(s.f1, 0.0);
    auto t = rouge_n(split("a"), split("a"), 2);  // no bigrams on either side
    EXPECT_EQ(t.f1, 0.0);
}

TEST(RougeN, RejectsNonPositiveOrder) {
    auto t = split("a b");
    EXPECT_THROW(rouge_n(t, t, 0), Error);
    EXPECT_THROW(rouge_n(t, t, -2), Error);
}

TEST(RougeN, MatchesCountingOracle) {
    testkit::Rng rng(71);
    std::uniform_int_distribution<std::size_t> len(0, 25), order(1, 3);
    for (int trial = 0; trial < 500; ++trial) {
        auto c = testkit::random_tokens(rng, len(rng), 6);
        auto r = testkit::random_tokens(rng, len(rng), 6);
        std::size_t n = order(rng);
        auto counts = testkit::count_ngram_overlap(c, r, n);
        auto s = rouge_n(c, r, static_cast<int>(n));
        double p = counts.candidate ? double(counts.overlap) / counts.candidate : 0.0;
        double rc = counts.reference ? double(counts.overlap) / counts.reference : 0.0;
        EXPECT_NEAR(s.precision, p, 1e-12);
        EXPECT_NEAR(s.recall, rc, 1e-12);
        expect_f1_invariant(s);
    }
}

TEST(RougeN, SwapSymmetry) {
    testkit::Rng rng(72);
    std::uniform_int_distribution<std::size_t> len(0, 30);
    for (int trial = 0; trial < 500; ++trial) {
        auto a = testkit::random_tokens(rng, len(rng), 8);
        auto b = testkit::random_tokens(rng, len(rng), 8);
        for (int n : {1, 2}) EXPECT_EQ(rouge_n(a, b, n).precision, rouge_n(b, a, n).recall);
    }
}

TEST(RougeN, RepeatingCandidateTokenNeverExceedsReferenceCount) {
    testkit::Rng rng(73);
    for (int trial = 0; trial < 200; ++trial) {
        auto r = testkit::random_tokens(rng, 10, 5);
        auto c = testkit::random_tokens(rng, 10, 5);
        auto before = testkit::count_ngram_overlap(c, r, 1).overlap;
        c.insert(c.end(), 5, c.front());
        auto after = testkit::count_ngram_overlap(c, r, 1).overlap;
        auto ref_count = static_cast<std::size_t>(std::count(r.begin(), r.end(), c.front()));
        EXPECT_LE(after - before, ref_count);
        EXPECT_LE(after, r.size());
        auto s = rouge_n(c, r, 1);
        EXPECT_NEAR(s.recall * r.size(), double(after), 1e-9);
    }
}

TEST(Lcs, Examples) {
    EXPECT_EQ(lcs_length(split("a b c d"), split("a c b d")), 3u);
    auto t = split("x y z x");
    EXPECT_EQ(lcs_length(t, t), 4u);
    EXPECT_EQ(lcs_length(t, {}), 0u);
    EXPECT_EQ(lcs_length({}, t), 0u);
}

TEST(Lcs, MatchesSubsequenceEnumeration) {
    testkit::Rng rng(81);
    std::uniform_int_distribution<std::size_t> len(0, 12);
    for (int trial = 0; trial < 300; ++trial) {
        auto a = testkit::random_tokens(rng, len(rng), 4);
        auto b = testkit::random_tokens(rng, len(rng), 4);
        std::size_t l = lcs_length(a, b);
        EXPECT_EQ(l, testkit::brute_force_lcs(a, b));
        EXPECT_LE(l, std::min(a.size(), b.size()));
        EXPECT_EQ(l, lcs_length(b, a));
    }
}

TEST(Lcs, EqualsLengthIffSubsequence) {
    testkit::Rng rng(82);
    std::bernoulli_distribution keep(0.5);
    for (int trial = 0; trial < 300; ++trial) {
        auto b = testkit::random_tokens(rng, 15, 5);
        TokenList a;
        for (const auto& t : b)
            if (keep(rng)) a.push_back(t);
        EXPECT_EQ(lcs_length(a, b), a.size());
        a.push_back("zz-not-in-b");
        EXPECT_LT(lcs_length(a, b), a.size());
    }
}

TEST(RougeL, Examples) {
    auto s = rouge_l(split("a b c d"), split("a c b d"));
    EXPECT_NEAR(s.precision, 0.75, 1e-12);
    EXPECT_NEAR(s.recall, 0.75, 1e-12);
    EXPECT_NEAR(s.f1, 0.75, 1e-12);
    auto t = split("p q r");
    auto id = rouge_l(t, t);
    EXPECT_EQ(id.precision, 1.0);
    EXPECT_EQ(id.f1, 1.0);
    auto disjoint = rouge_l(split("a b"), split("c d"));
    EXPECT_EQ(disjoint.precision, 0.0);
    EXPECT_EQ(disjoint.recall, 0.0);
    EXPECT_EQ(disjoint.f1, 0.0);
    EXPECT_EQ(rouge_l({}, {}).f1, 0.0);
}

TEST(RougeL, F1InvariantOnRandomPairs) {
    testkit::Rng rng(83);
    std::uniform_int_distribution<std::size_t> len(0, 30);
    for (int trial = 0; trial < 300; ++trial) {
        auto a = testkit::random_tokens(rng, len(rng), 6);
        auto b = testkit::random_tokens(rng, len(rng), 6);
        expect_f1_invariant(rouge_l(a, b));
    }
}

TEST(RougeMetric, Parsing) {
    EXPECT_EQ(parse_rouge_metric("1"), RougeMetric::Rouge1);
    EXPECT_EQ(parse_rouge_metric("ROUGE-2"), RougeMetric::Rouge2);
    EXPECT_EQ(parse_rouge_metric("L"), RougeMetric::RougeL);
    EXPECT_EQ(parse_rouge_metric("l"), RougeMetric::RougeL);
    EXPECT_THROW(parse_rouge_metric("3"), Error);
    EXPECT_EQ(to_string(RougeMetric::RougeL), "ROUGE-L");
}
