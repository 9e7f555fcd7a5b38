#pragma once

#include <cstddef>
#include <cstdint>

namespace highlight::extractor {

// Shape and objective of the joint sentence/span model. Defaults are the
// desk-scale configuration; the original large-scale setting (768 hidden,
// 12 layers, 12 heads, dropout 0.1) is reachable through the same fields.
struct ModelConfig {
    std::size_t embed_dim = 32;
    std::size_t encoder_layers = 1;
    std::size_t attention_heads = 2;
    std::size_t ff_dim = 64;
    // Longest token sequence the encoder sees, not counting [CLS]. Longer
    // sentences are truncated.
    std::size_t max_sentence_len = 64;
    // Number of document-position rows. Sentence indices past the end share
    // the last row.
    std::size_t max_doc_positions = 64;
    double lambda = 0.1;
    double dropout_p = 0.0;
    double init_range = 0.1;
    std::uint64_t seed = 13;

    std::size_t head_dim() const noexcept { return embed_dim / attention_heads; }
    // Rows in the token-position table: [CLS] plus max_sentence_len tokens.
    std::size_t sentence_positions() const noexcept { return max_sentence_len + 1; }

    void validate() const;
};

enum class Optimizer { GradientDescent, Adam };

struct TrainOptions {
    Optimizer optimizer = Optimizer::GradientDescent;
    double learning_rate = 0.05;
    std::size_t max_epochs = 200;
    // 0 means full batch.
    std::size_t batch_size = 0;
    // Stop after this many epochs without a validation-loss improvement.
    std::size_t patience = 20;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    // Log per-epoch train/validation loss to stderr.
    bool verbose = false;
};

}  // namespace highlight::extractor
