#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "highlight/error.hpp"
#include "highlight/extractor/model.hpp"

using namespace highlight;
using namespace highlight::extractor;

namespace {

ModelConfig config() {
    ModelConfig cfg;
    cfg.embed_dim = 8;
    cfg.attention_heads = 2;
    cfg.ff_dim = 12;
    cfg.encoder_layers = 2;
    cfg.init_range = 0.5;
    return cfg;
}

Matrix random_input(std::mt19937_64& rng, long rows, long cols) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix x(rows, cols);
    for (long j = 0; j < cols; ++j)
        for (long i = 0; i < rows; ++i) x(i, j) = n(rng);
    return x;
}

Matrix layer_norm_rows(const Matrix& x, const Matrix& gain, const Matrix& bias) {
    Matrix y(x.rows(), x.cols());
    for (long i = 0; i < x.rows(); ++i) {
        double mean = x.row(i).mean();
        double var = (x.row(i).array() - mean).square().mean();
        y.row(i) = ((x.row(i).array() - mean) / std::sqrt(var + 1e-5)) * gain.row(0).array() + bias.row(0).array();
    }
    return y;
}

double gelu(double z) { return 0.5 * z * (1.0 + std::tanh(std::sqrt(2.0 / M_PI) * (z + 0.044715 * z * z * z))); }

}  // namespace

TEST(Encode, SingleRowReducesToValuePath) {
    auto cfg = config();
    cfg.encoder_layers = 1;
    auto params = init_parameters(cfg, 4);
    std::mt19937_64 rng(1);
    Matrix x = random_input(rng, 1, 8);
    AttentionTrace trace;
    Matrix h = encode(x, params, cfg, &trace);
    for (const auto& head : trace[0]) EXPECT_NEAR(head(0, 0), 1.0, 1e-15);

    // With one position the attention output is the value projection itself.
    const auto& l = params.layers[0];
    Matrix a = layer_norm_rows(x, l.ln1_gain, l.ln1_bias);
    Matrix v = a * l.w_value + l.b_value;
    Matrix mid = x + v * l.w_out + l.b_out;
    Matrix f = layer_norm_rows(mid, l.ln2_gain, l.ln2_bias) * l.w_ff1 + l.b_ff1;
    Matrix out = mid + f.unaryExpr([](double z) { return gelu(z); }) * l.w_ff2 + l.b_ff2;
    Matrix expected = layer_norm_rows(out, params.final_ln_gain, params.final_ln_bias);
    EXPECT_LT((h - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Encode, Bidirectional) {
    auto cfg = config();
    auto params = init_parameters(cfg, 4);
    std::mt19937_64 rng(2);
    Matrix x = random_input(rng, 6, 8);
    Matrix h = encode(x, params, cfg);
    Matrix y = x;
    y.row(5) += random_input(rng, 1, 8);
    EXPECT_GT((encode(y, params, cfg).row(0) - h.row(0)).cwiseAbs().maxCoeff(), 1e-6);
    Matrix z = x;
    z.row(0) += random_input(rng, 1, 8);
    EXPECT_GT((encode(z, params, cfg).row(5) - h.row(5)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Encode, PermutationEquivariant) {
    auto cfg = config();
    auto params = init_parameters(cfg, 4);
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix x = random_input(rng, 7, 8);
        std::uniform_int_distribution<long> pos(1, 6);
        long i = pos(rng), j = pos(rng);
        Matrix swapped = x;
        swapped.row(i).swap(swapped.row(j));
        Matrix h = encode(x, params, cfg);
        Matrix hs = encode(swapped, params, cfg);
        hs.row(i).swap(hs.row(j));
        EXPECT_LT((h - hs).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Encode, AttentionRowsAreSimplexes) {
    auto cfg = config();
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        cfg.seed = static_cast<std::uint64_t>(trial);
        auto params = init_parameters(cfg, 4);
        AttentionTrace trace;
        encode(random_input(rng, 1 + trial % 9, 8) * 3.0, params, cfg, &trace);
        ASSERT_EQ(trace.size(), cfg.encoder_layers);
        for (const auto& layer : trace) {
            ASSERT_EQ(layer.size(), cfg.attention_heads);
            for (const auto& p : layer) {
                EXPECT_GE(p.minCoeff(), 0.0);
                for (long r = 0; r < p.rows(); ++r) EXPECT_NEAR(p.row(r).sum(), 1.0, 1e-6);
            }
        }
    }
}

TEST(Encode, Deterministic) {
    auto cfg = config();
    auto params = init_parameters(cfg, 4);
    std::mt19937_64 rng(6);
    Matrix x = random_input(rng, 5, 8);
    EXPECT_EQ(encode(x, params, cfg), encode(x, params, cfg));
}

TEST(Encode, ShapeMismatch) {
    auto cfg = config();
    auto params = init_parameters(cfg, 4);
    EXPECT_THROW(encode(Matrix::Zero(3, 7), params, cfg), Error);
    EXPECT_THROW(encode(Matrix::Zero(0, 8), params, cfg), Error);
    auto other = cfg;
    other.encoder_layers = 1;
    EXPECT_THROW(encode(Matrix::Zero(3, 8), params, other), Error);
}
