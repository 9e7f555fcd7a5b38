#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "highlight/extractor/config.hpp"

namespace highlight::extractor {

using Matrix = Eigen::MatrixXd;
// Biases and gains are stored as 1 x n matrices so that every tensor can be
// walked through the same visitor.
using RowVector = Eigen::MatrixXd;

struct EncoderLayer {
    RowVector ln1_gain, ln1_bias;
    Matrix w_query, w_key, w_value, w_out;
    RowVector b_query, b_key, b_value, b_out;
    RowVector ln2_gain, ln2_bias;
    Matrix w_ff1, w_ff2;
    RowVector b_ff1, b_ff2;
};

struct Parameters {
    Matrix token_embedding;         // vocab x d
    Matrix sentence_pos_embedding;  // (max_sentence_len + 1) x d, row 0 is [CLS]
    Matrix doc_pos_embedding;       // max_doc_positions x d
    std::vector<EncoderLayer> layers;
    RowVector final_ln_gain, final_ln_bias;
    Matrix sentence_head;           // d x 2
    RowVector sentence_head_bias;   // 2
    // d x 2: column 0 scores start positions, column 1 end positions. No bias,
    // the per-channel softmax over positions would cancel it.
    Matrix span_head;
};

// Zero-filled tensors with the shapes implied by cfg and vocab_size.
Parameters zero_parameters(const ModelConfig& cfg, std::size_t vocab_size);

// Weights uniform in [-init_range, init_range] from cfg.seed; layer-norm gains
// start at 1 and layer-norm biases at 0.
Parameters init_parameters(const ModelConfig& cfg, std::size_t vocab_size);

// Visits every tensor with a stable dotted name, e.g. "layers.0.w_query".
void for_each_tensor(Parameters& p, const std::function<void(const std::string&, Matrix&)>& fn);
void for_each_tensor(const Parameters& p, const std::function<void(const std::string&, const Matrix&)>& fn);

// Visits matching tensor pairs of two identically shaped parameter sets.
void for_each_tensor_pair(Parameters& a, const Parameters& b, const std::function<void(Matrix&, const Matrix&)>& fn);

std::size_t parameter_count(const Parameters& p);
bool all_finite(const Parameters& p);

// Flattened copy of every scalar, in visitor order.
std::vector<double> flatten(const Parameters& p);

}  // namespace highlight::extractor
