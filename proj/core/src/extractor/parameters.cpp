#include "highlight/extractor/parameters.hpp"

#include <random>

#include "highlight/error.hpp"

namespace highlight::extractor {

void ModelConfig::validate() const {
    if (embed_dim == 0) throw Error("embed_dim must be positive");
    if (attention_heads == 0 || embed_dim % attention_heads != 0)
        throw Error("embed_dim (" + std::to_string(embed_dim) + ") must be divisible by attention_heads (" +
                    std::to_string(attention_heads) + ")");
    if (ff_dim == 0) throw Error("ff_dim must be positive");
    if (max_sentence_len == 0) throw Error("max_sentence_len must be positive");
    if (max_doc_positions == 0) throw Error("max_doc_positions must be positive");
    if (!(lambda >= 0.0)) throw Error("lambda must be non-negative");
    if (!(dropout_p >= 0.0 && dropout_p < 1.0)) throw Error("dropout_p must lie in [0, 1)");
    if (!(init_range > 0.0)) throw Error("init_range must be positive");
}

Parameters zero_parameters(const ModelConfig& cfg, std::size_t vocab_size) {
    cfg.validate();
    const auto d = static_cast<Eigen::Index>(cfg.embed_dim);
    const auto ff = static_cast<Eigen::Index>(cfg.ff_dim);
    Parameters p;
    p.token_embedding = Matrix::Zero(static_cast<Eigen::Index>(vocab_size), d);
    p.sentence_pos_embedding = Matrix::Zero(static_cast<Eigen::Index>(cfg.sentence_positions()), d);
    p.doc_pos_embedding = Matrix::Zero(static_cast<Eigen::Index>(cfg.max_doc_positions), d);
    p.layers.resize(cfg.encoder_layers);
    for (auto& l : p.layers) {
        l.ln1_gain = l.ln1_bias = l.ln2_gain = l.ln2_bias = Matrix::Zero(1, d);
        l.w_query = l.w_key = l.w_value = l.w_out = Matrix::Zero(d, d);
        l.b_query = l.b_key = l.b_value = l.b_out = Matrix::Zero(1, d);
        l.w_ff1 = Matrix::Zero(d, ff);
        l.b_ff1 = Matrix::Zero(1, ff);
        l.w_ff2 = Matrix::Zero(ff, d);
        l.b_ff2 = Matrix::Zero(1, d);
    }
    p.final_ln_gain = p.final_ln_bias = Matrix::Zero(1, d);
    p.sentence_head = Matrix::Zero(d, 2);
    p.sentence_head_bias = Matrix::Zero(1, 2);
    p.span_head = Matrix::Zero(d, 2);
    return p;
}

namespace {

bool is_layer_norm_gain(const std::string& name) {
    return name.ends_with("ln1_gain") || name.ends_with("ln2_gain") || name == "final_ln_gain";
}

bool is_layer_norm_bias(const std::string& name) {
    return name.ends_with("ln1_bias") || name.ends_with("ln2_bias") || name == "final_ln_bias";
}

}  // namespace

Parameters init_parameters(const ModelConfig& cfg, std::size_t vocab_size) {
    Parameters p = zero_parameters(cfg, vocab_size);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> uniform(-cfg.init_range, cfg.init_range);
    for_each_tensor(p, [&](const std::string& name, Matrix& m) {
        if (is_layer_norm_gain(name)) {
            m.setOnes();
        } else if (is_layer_norm_bias(name)) {
            m.setZero();
        } else {
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = uniform(rng);
        }
    });
    return p;
}

namespace {

template <typename P, typename Fn>
void visit(P& p, Fn&& fn) {
    fn("token_embedding", p.token_embedding);
    fn("sentence_pos_embedding", p.sentence_pos_embedding);
    fn("doc_pos_embedding", p.doc_pos_embedding);
    for (std::size_t i = 0; i < p.layers.size(); ++i) {
        auto& l = p.layers[i];
        const std::string pre = "layers." + std::to_string(i) + ".";
        fn(pre + "ln1_gain", l.ln1_gain);
        fn(pre + "ln1_bias", l.ln1_bias);
        fn(pre + "w_query", l.w_query);
        fn(pre + "b_query", l.b_query);
        fn(pre + "w_key", l.w_key);
        fn(pre + "b_key", l.b_key);
        fn(pre + "w_value", l.w_value);
        fn(pre + "b_value", l.b_value);
        fn(pre + "w_out", l.w_out);
        fn(pre + "b_out", l.b_out);
        fn(pre + "ln2_gain", l.ln2_gain);
        fn(pre + "ln2_bias", l.ln2_bias);
        fn(pre + "w_ff1", l.w_ff1);
        fn(pre + "b_ff1", l.b_ff1);
        fn(pre + "w_ff2", l.w_ff2);
        fn(pre + "b_ff2", l.b_ff2);
    }
    fn("final_ln_gain", p.final_ln_gain);
    fn("final_ln_bias", p.final_ln_bias);
    fn("sentence_head", p.sentence_head);
    fn("sentence_head_bias", p.sentence_head_bias);
    fn("span_head", p.span_head);
}

}  // namespace

void for_each_tensor(Parameters& p, const std::function<void(const std::string&, Matrix&)>& fn) {
    visit(p, [&](const std::string& name, Matrix& m) { fn(name, m); });
}

void for_each_tensor(const Parameters& p, const std::function<void(const std::string&, const Matrix&)>& fn) {
    visit(p, [&](const std::string& name, const Matrix& m) { fn(name, m); });
}

void for_each_tensor_pair(Parameters& a, const Parameters& b, const std::function<void(Matrix&, const Matrix&)>& fn) {
    std::vector<const Matrix*> rhs;
    for_each_tensor(b, [&](const std::string&, const Matrix& m) { rhs.push_back(&m); });
    std::size_t k = 0;
    for_each_tensor(a, [&](const std::string& name, Matrix& m) {
        if (k >= rhs.size() || rhs[k]->rows() != m.rows() || rhs[k]->cols() != m.cols())
            throw Error("parameter shape mismatch at " + name);
        fn(m, *rhs[k++]);
    });
    if (k != rhs.size()) throw Error("parameter sets have different tensor counts");
}

std::size_t parameter_count(const Parameters& p) {
    std::size_t n = 0;
    for_each_tensor(p, [&](const std::string&, const Matrix& m) { n += static_cast<std::size_t>(m.size()); });
    return n;
}

bool all_finite(const Parameters& p) {
    bool ok = true;
    for_each_tensor(p, [&](const std::string&, const Matrix& m) { ok = ok && m.allFinite(); });
    return ok;
}

std::vector<double> flatten(const Parameters& p) {
    std::vector<double> out;
    out.reserve(parameter_count(p));
    for_each_tensor(p, [&](const std::string&, const Matrix& m) { out.insert(out.end(), m.data(), m.data() + m.size()); });
    return out;
}

}  // namespace highlight::extractor
