#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "highlight/extractor/config.hpp"
#include "highlight/extractor/parameters.hpp"
#include "highlight/extractor/vocab.hpp"
#include "highlight/smoothing.hpp"

namespace highlight::extractor {

// One sentence as the model sees it.
struct TrainingInstance {
    std::string doc_id;
    std::size_t sentence_index = 0;
    // [CLS] followed by the (possibly truncated) sentence tokens.
    std::vector<TokenId> token_ids;
    // Row of the document-position table; sentence_index clamped to the table.
    std::size_t doc_position = 0;
    // Span over the un-prefixed tokens, inclusive. Present iff label is 1.
    std::optional<Run> span;

    int label() const noexcept { return span ? 1 : 0; }
    std::size_t sentence_length() const noexcept { return token_ids.empty() ? 0 : token_ids.size() - 1; }
};

struct Prediction {
    double sentence_prob = 0.5;   // P(label = 1)
    Eigen::VectorXd start_dist;   // over sentence positions, [CLS] excluded
    Eigen::VectorXd end_dist;
};

// Throws when the instance breaks its invariants or does not fit cfg/vocab.
void validate_instance(const TrainingInstance& inst, const ModelConfig& cfg, std::size_t vocab_size);

// Row i is token + token-position + document-position embedding.
Matrix embed(const TrainingInstance& inst, const Parameters& params, const ModelConfig& cfg);

// Per-layer, per-head attention probabilities (seq x seq), filled by encode on request.
using AttentionTrace = std::vector<std::vector<Matrix>>;

// Bidirectional pre-norm transformer encoder followed by a final layer norm.
// No dropout is applied here.
Matrix encode(const Matrix& embedded, const Parameters& params, const ModelConfig& cfg,
              AttentionTrace* trace = nullptr);

// Sentence head on row 0, start/end channels on rows 1..n. h needs >= 2 rows.
Prediction heads(const Matrix& h, const Parameters& params);

Prediction forward(const TrainingInstance& inst, const Parameters& params, const ModelConfig& cfg);

// Cross entropy of the sentence label, plus lambda * (start + end) cross
// entropy for positive instances.
double loss(const Prediction& pred, const TrainingInstance& inst, double lambda);

struct GradientResult {
    Parameters gradient;  // d(mean batch loss)/d(parameter), same shapes as the parameters
    double mean_loss = 0.0;
};

// Analytic gradient of the mean loss over batch. When dropout_rng is set and
// cfg.dropout_p > 0, inverted dropout is applied to both sublayer outputs.
GradientResult grad(std::span<const TrainingInstance> batch, const Parameters& params, const ModelConfig& cfg,
                    std::mt19937_64* dropout_rng = nullptr);

double mean_loss(std::span<const TrainingInstance> batch, const Parameters& params, const ModelConfig& cfg);

}  // namespace highlight::extractor
