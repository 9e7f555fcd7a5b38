#include <gtest/gtest.h>

#include <random>

#include "highlight/extractor/gradcheck.hpp"
#include "highlight/extractor/model.hpp"

using namespace highlight;
using namespace highlight::extractor;

namespace {

double max_abs(const Parameters& p) {
    double m = 0.0;
    for_each_tensor(p, [&](const std::string&, const Matrix& t) {
        if (t.size() > 0) m = std::max(m, t.cwiseAbs().maxCoeff());
    });
    return m;
}

}  // namespace

TEST(GradCheck, RelativeError) {
    EXPECT_DOUBLE_EQ(relative_error(1.0, 1.0, 1e-7), 0.0);
    EXPECT_DOUBLE_EQ(relative_error(2.0, 1.0, 1e-7), 0.5);
    EXPECT_DOUBLE_EQ(relative_error(0.0, 1e-9, 1e-6), 1e-3);
    EXPECT_DOUBLE_EQ(relative_error(0.0, 0.0, 1e-7), 0.0);
}

TEST(GradCheck, TinyProblemWithinTolerance) {
    for (std::uint64_t seed : {1u, 2u}) {
        auto problem = make_gradcheck_problem(seed);
        auto report = gradient_check(problem.batch, problem.params, problem.cfg);
        EXPECT_EQ(report.checked, parameter_count(problem.params));
        EXPECT_LT(report.max_rel_error, 1e-4)
            << report.worst.tensor << "(" << report.worst.row << "," << report.worst.col << ") analytic "
            << report.worst.analytic << " numeric " << report.worst.numeric;
    }
}

TEST(GradCheck, ProblemMixesLabels) {
    auto problem = make_gradcheck_problem(3);
    int positives = 0;
    for (const auto& inst : problem.batch) positives += inst.label();
    EXPECT_GT(positives, 0);
    EXPECT_LT(positives, int(problem.batch.size()));
}

TEST(Gradient, PerfectPredictionHasZeroGradient) {
    ModelConfig cfg;
    cfg.embed_dim = 8;
    cfg.attention_heads = 2;
    cfg.ff_dim = 16;
    cfg.max_sentence_len = 6;
    cfg.max_doc_positions = 2;
    auto params = zero_parameters(cfg, 6);
    // Encoder layers are identities with zero weights; the final norm separates the tokens.
    params.final_ln_gain.setOnes();
    for (auto& layer : params.layers) {
        layer.ln1_gain.setOnes();
        layer.ln2_gain.setOnes();
    }
    params.token_embedding(2, 0) = 1.0;  // start marker
    params.token_embedding(3, 1) = 1.0;  // end marker
    params.token_embedding(4, 2) = 1.0;  // filler
    params.span_head(0, 0) = 1000.0;
    params.span_head(1, 1) = 1000.0;
    params.sentence_head_bias(0, 0) = -1000.0;
    params.sentence_head_bias(0, 1) = 1000.0;

    TrainingInstance inst;
    inst.token_ids = {Vocab::kCls, 4, 2, 4, 3, 4};
    inst.span = highlight::Run{1, 3};
    Prediction pred = forward(inst, params, cfg);
    ASSERT_EQ(pred.sentence_prob, 1.0);
    ASSERT_EQ(pred.start_dist(1), 1.0);
    ASSERT_EQ(pred.end_dist(3), 1.0);

    std::vector<TrainingInstance> batch{inst};
    auto result = grad(batch, params, cfg);
    EXPECT_NEAR(result.mean_loss, 0.0, 1e-12);
    EXPECT_LT(max_abs(result.gradient), 1e-8);
}

TEST(Gradient, SpanHeadGradientScalesWithLambda) {
    auto problem = make_gradcheck_problem(4);
    std::vector<TrainingInstance> positives;
    for (const auto& inst : problem.batch)
        if (inst.label() == 1) positives.push_back(inst);
    ASSERT_FALSE(positives.empty());
    auto cfg = problem.cfg;
    cfg.lambda = 0.1;
    auto g1 = grad(positives, problem.params, cfg).gradient;
    cfg.lambda = 0.2;
    auto g2 = grad(positives, problem.params, cfg).gradient;
    EXPECT_FALSE(g1.span_head.isZero(0.0));
    for (long i = 0; i < g1.span_head.size(); ++i) EXPECT_EQ(g2.span_head(i), 2.0 * g1.span_head(i));
    // The sentence head does not see lambda at all.
    EXPECT_EQ(g1.sentence_head, g2.sentence_head);
    EXPECT_EQ(g1.sentence_head_bias, g2.sentence_head_bias);
}

TEST(Gradient, NegativesLeaveSpanHeadAlone) {
    auto problem = make_gradcheck_problem(5);
    std::vector<TrainingInstance> negatives;
    for (const auto& inst : problem.batch)
        if (inst.label() == 0) negatives.push_back(inst);
    ASSERT_FALSE(negatives.empty());
    auto g = grad(negatives, problem.params, problem.cfg).gradient;
    EXPECT_TRUE(g.span_head.isZero(0.0));
    EXPECT_FALSE(g.sentence_head.isZero(0.0));
}

TEST(Gradient, MeanOverBatch) {
    auto problem = make_gradcheck_problem(6);
    const auto& batch = problem.batch;
    auto full = grad(batch, problem.params, problem.cfg);
    EXPECT_NEAR(full.mean_loss, mean_loss(batch, problem.params, problem.cfg), 1e-12);
    auto expected = zero_parameters(problem.cfg, problem.params.token_embedding.rows());
    for (const auto& inst : batch) {
        std::vector<TrainingInstance> one{inst};
        auto g = grad(one, problem.params, problem.cfg).gradient;
        for_each_tensor_pair(expected, g, [&](Matrix& acc, const Matrix& t) { acc += t / double(batch.size()); });
    }
    std::vector<double> a = flatten(full.gradient), b = flatten(expected);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
}

TEST(Gradient, DropoutOnlyWithGenerator) {
    auto problem = make_gradcheck_problem(7);
    auto cfg = problem.cfg;
    cfg.dropout_p = 0.3;
    auto plain = flatten(grad(problem.batch, problem.params, problem.cfg).gradient);
    EXPECT_EQ(flatten(grad(problem.batch, problem.params, cfg).gradient), plain);
    std::mt19937_64 rng(1);
    EXPECT_NE(flatten(grad(problem.batch, problem.params, cfg, &rng).gradient), plain);
    std::mt19937_64 a(2), b(2);
    EXPECT_EQ(flatten(grad(problem.batch, problem.params, cfg, &a).gradient),
              flatten(grad(problem.batch, problem.params, cfg, &b).gradient));
}
