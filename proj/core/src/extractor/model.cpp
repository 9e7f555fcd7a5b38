#include "highlight/extractor/model.hpp"

#include <cmath>

#include "highlight/error.hpp"

namespace highlight::extractor {

namespace {

constexpr double kLayerNormEps = 1e-5;
constexpr double kGeluScale = 0.7978845608028654;  // sqrt(2 / pi)
constexpr double kGeluCubic = 0.044715;

using Eigen::Index;

struct LayerNormCache {
    Matrix normalized;
    Eigen::VectorXd inv_std;
};

Matrix layer_norm(const Matrix& x, const Matrix& gain, const Matrix& bias, LayerNormCache& cache) {
    const Index n = x.rows();
    const double width = static_cast<double>(x.cols());
    cache.normalized.resize(n, x.cols());
    cache.inv_std.resize(n);
    for (Index i = 0; i < n; ++i) {
        double mean = x.row(i).mean();
        Eigen::RowVectorXd centered = x.row(i).array() - mean;
        double var = centered.squaredNorm() / width;
        cache.inv_std(i) = 1.0 / std::sqrt(var + kLayerNormEps);
        cache.normalized.row(i) = centered * cache.inv_std(i);
    }
    Matrix y = cache.normalized.array().rowwise() * gain.row(0).array();
    y.rowwise() += bias.row(0);
    return y;
}

Matrix layer_norm_backward(const Matrix& dy, const LayerNormCache& cache, const Matrix& gain, Matrix& dgain,
                           Matrix& dbias) {
    dgain += (dy.array() * cache.normalized.array()).colwise().sum().matrix();
    dbias += dy.colwise().sum();
    Matrix dnorm = dy.array().rowwise() * gain.row(0).array();
    Matrix dx(dy.rows(), dy.cols());
    for (Index i = 0; i < dy.rows(); ++i) {
        double mean_d = dnorm.row(i).mean();
        double mean_dn = dnorm.row(i).dot(cache.normalized.row(i)) / static_cast<double>(dy.cols());
        dx.row(i) = cache.inv_std(i) *
                    (dnorm.row(i).array() - mean_d - cache.normalized.row(i).array() * mean_dn).matrix();
    }
    return dx;
}

double gelu(double z) { return 0.5 * z * (1.0 + std::tanh(kGeluScale * (z + kGeluCubic * z * z * z))); }

double gelu_derivative(double z) {
    double t = std::tanh(kGeluScale * (z + kGeluCubic * z * z * z));
    return 0.5 * (1.0 + t) + 0.5 * z * (1.0 - t * t) * kGeluScale * (1.0 + 3.0 * kGeluCubic * z * z);
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
    Eigen::VectorXd e = (logits.array() - logits.maxCoeff()).exp();
    return e / e.sum();
}

Matrix softmax_rows(const Matrix& s) {
    Matrix out(s.rows(), s.cols());
    for (Index i = 0; i < s.rows(); ++i) {
        Eigen::RowVectorXd e = (s.row(i).array() - s.row(i).maxCoeff()).exp();
        out.row(i) = e / e.sum();
    }
    return out;
}

// Inverted-dropout mask: 0 with probability p, 1/(1-p) otherwise.
Matrix dropout_mask(Index rows, Index cols, double p, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix m(rows, cols);
    const double keep = 1.0 / (1.0 - p);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = u(rng) < p ? 0.0 : keep;
    return m;
}

struct LayerCache {
    LayerNormCache ln1;
    Matrix attn_in, query, key, value;
    std::vector<Matrix> probs;  // per head
    Matrix concat;
    Matrix attn_mask;  // empty when dropout is off
    LayerNormCache ln2;
    Matrix ff_in, pre_activation, activation;
    Matrix ff_mask;
};

struct DropoutContext {
    double p = 0.0;
    std::mt19937_64* rng = nullptr;
    bool active() const { return rng != nullptr && p > 0.0; }
};

Matrix layer_forward(const Matrix& x, const EncoderLayer& l, const ModelConfig& cfg, LayerCache& c,
                     const DropoutContext& dropout, std::vector<Matrix>* trace) {
    const Index n = x.rows();
    const Index dk = static_cast<Index>(cfg.head_dim());
    const double scale = 1.0 / std::sqrt(static_cast<double>(dk));

    c.attn_in = layer_norm(x, l.ln1_gain, l.ln1_bias, c.ln1);
    c.query = c.attn_in * l.w_query;
    c.query.rowwise() += l.b_query.row(0);
    c.key = c.attn_in * l.w_key;
    c.key.rowwise() += l.b_key.row(0);
    c.value = c.attn_in * l.w_value;
    c.value.rowwise() += l.b_value.row(0);

    c.concat.resize(n, x.cols());
    c.probs.clear();
    for (std::size_t h = 0; h < cfg.attention_heads; ++h) {
        const Index c0 = static_cast<Index>(h) * dk;
        Matrix scores = (c.query.middleCols(c0, dk) * c.key.middleCols(c0, dk).transpose()) * scale;
        Matrix p = softmax_rows(scores);
        c.concat.middleCols(c0, dk) = p * c.value.middleCols(c0, dk);
        if (trace) trace->push_back(p);
        c.probs.push_back(std::move(p));
    }
    Matrix attn_out = c.concat * l.w_out;
    attn_out.rowwise() += l.b_out.row(0);
    if (dropout.active()) {
        c.attn_mask = dropout_mask(n, x.cols(), dropout.p, *dropout.rng);
        attn_out = attn_out.cwiseProduct(c.attn_mask);
    } else {
        c.attn_mask.resize(0, 0);
    }
    Matrix mid = x + attn_out;

    c.ff_in = layer_norm(mid, l.ln2_gain, l.ln2_bias, c.ln2);
    c.pre_activation = c.ff_in * l.w_ff1;
    c.pre_activation.rowwise() += l.b_ff1.row(0);
    c.activation = c.pre_activation.unaryExpr([](double z) { return gelu(z); });
    Matrix ff_out = c.activation * l.w_ff2;
    ff_out.rowwise() += l.b_ff2.row(0);
    if (dropout.active()) {
        c.ff_mask = dropout_mask(n, x.cols(), dropout.p, *dropout.rng);
        ff_out = ff_out.cwiseProduct(c.ff_mask);
    } else {
        c.ff_mask.resize(0, 0);
    }
    return mid + ff_out;
}

Matrix layer_backward(const Matrix& d_out, const EncoderLayer& l, const LayerCache& c, const ModelConfig& cfg,
                      EncoderLayer& g) {
    const Index dk = static_cast<Index>(cfg.head_dim());
    const double scale = 1.0 / std::sqrt(static_cast<double>(dk));

    // Feed-forward sublayer.
    Matrix d_ff = c.ff_mask.size() ? Matrix(d_out.cwiseProduct(c.ff_mask)) : d_out;
    g.w_ff2 += c.activation.transpose() * d_ff;
    g.b_ff2 += d_ff.colwise().sum();
    Matrix d_pre = (d_ff * l.w_ff2.transpose()).cwiseProduct(
        c.pre_activation.unaryExpr([](double z) { return gelu_derivative(z); }));
    g.w_ff1 += c.ff_in.transpose() * d_pre;
    g.b_ff1 += d_pre.colwise().sum();
    Matrix d_mid = d_out + layer_norm_backward(d_pre * l.w_ff1.transpose(), c.ln2, l.ln2_gain, g.ln2_gain, g.ln2_bias);

    // Attention sublayer.
    Matrix d_attn = c.attn_mask.size() ? Matrix(d_mid.cwiseProduct(c.attn_mask)) : d_mid;
    g.w_out += c.concat.transpose() * d_attn;
    g.b_out += d_attn.colwise().sum();
    Matrix d_concat = d_attn * l.w_out.transpose();

    Matrix d_query = Matrix::Zero(c.query.rows(), c.query.cols());
    Matrix d_key = Matrix::Zero(c.key.rows(), c.key.cols());
    Matrix d_value = Matrix::Zero(c.value.rows(), c.value.cols());
    for (std::size_t h = 0; h < cfg.attention_heads; ++h) {
        const Index c0 = static_cast<Index>(h) * dk;
        const Matrix& p = c.probs[h];
        Matrix d_head = d_concat.middleCols(c0, dk);
        Matrix d_p = d_head * c.value.middleCols(c0, dk).transpose();
        d_value.middleCols(c0, dk) += p.transpose() * d_head;
        Eigen::VectorXd row_dot = (d_p.cwiseProduct(p)).rowwise().sum();
        Matrix d_scores = p.cwiseProduct(d_p.colwise() - row_dot);
        d_query.middleCols(c0, dk) += (d_scores * c.key.middleCols(c0, dk)) * scale;
        d_key.middleCols(c0, dk) += (d_scores.transpose() * c.query.middleCols(c0, dk)) * scale;
    }
    g.w_query += c.attn_in.transpose() * d_query;
    g.b_query += d_query.colwise().sum();
    g.w_key += c.attn_in.transpose() * d_key;
    g.b_key += d_key.colwise().sum();
    g.w_value += c.attn_in.transpose() * d_value;
    g.b_value += d_value.colwise().sum();
    Matrix d_attn_in = d_query * l.w_query.transpose() + d_key * l.w_key.transpose() + d_value * l.w_value.transpose();
    return d_mid + layer_norm_backward(d_attn_in, c.ln1, l.ln1_gain, g.ln1_gain, g.ln1_bias);
}

struct ForwardCache {
    std::vector<LayerCache> layers;
    LayerNormCache final_ln;
    Matrix h;
    Eigen::VectorXd sentence_probs;  // over {0, 1}
    Prediction pred;
};

void check_shapes(const Matrix& embedded, const Parameters& params, const ModelConfig& cfg) {
    cfg.validate();
    if (embedded.rows() < 1) throw Error("encode: empty sequence");
    if (embedded.cols() != static_cast<Index>(cfg.embed_dim))
        throw Error("encode: input width " + std::to_string(embedded.cols()) + " does not match embed_dim " +
                    std::to_string(cfg.embed_dim));
    if (params.layers.size() != cfg.encoder_layers)
        throw Error("encode: parameters have " + std::to_string(params.layers.size()) + " layers, config expects " +
                    std::to_string(cfg.encoder_layers));
    if (params.final_ln_gain.cols() != embedded.cols()) throw Error("encode: parameter width mismatch");
}

Matrix run_encoder(const Matrix& embedded, const Parameters& params, const ModelConfig& cfg, ForwardCache& cache,
                   const DropoutContext& dropout, AttentionTrace* trace) {
    check_shapes(embedded, params, cfg);
    cache.layers.resize(params.layers.size());
    Matrix x = embedded;
    for (std::size_t i = 0; i < params.layers.size(); ++i) {
        std::vector<Matrix>* layer_trace = nullptr;
        if (trace) layer_trace = &trace->emplace_back();
        x = layer_forward(x, params.layers[i], cfg, cache.layers[i], dropout, layer_trace);
    }
    return layer_norm(x, params.final_ln_gain, params.final_ln_bias, cache.final_ln);
}

Prediction heads_impl(const Matrix& h, const Parameters& params, Eigen::VectorXd* sentence_probs) {
    if (h.rows() < 2) throw Error("heads: need [CLS] plus at least one token");
    Eigen::VectorXd sent_logits = (h.row(0) * params.sentence_head + params.sentence_head_bias).transpose();
    Eigen::VectorXd sent = softmax(sent_logits);
    Matrix span_logits = h.bottomRows(h.rows() - 1) * params.span_head;
    Prediction pred;
    pred.sentence_prob = sent(1);
    pred.start_dist = softmax(span_logits.col(0));
    pred.end_dist = softmax(span_logits.col(1));
    if (sentence_probs) *sentence_probs = std::move(sent);
    return pred;
}

double cross_entropy(double prob) { return -std::log(prob); }

}  // namespace

void validate_instance(const TrainingInstance& inst, const ModelConfig& cfg, std::size_t vocab_size) {
    if (inst.token_ids.size() < 2) throw Error("instance needs [CLS] plus at least one token");
    if (inst.token_ids.front() != Vocab::kCls) throw Error("instance must start with the [CLS] id");
    for (TokenId id : inst.token_ids)
        if (id >= vocab_size) throw Error("token id " + std::to_string(id) + " outside the vocabulary");
    if (inst.sentence_length() > cfg.max_sentence_len)
        throw Error("sentence of " + std::to_string(inst.sentence_length()) + " tokens exceeds max_sentence_len " +
                    std::to_string(cfg.max_sentence_len));
    if (inst.doc_position >= cfg.max_doc_positions)
        throw Error("document position " + std::to_string(inst.doc_position) + " exceeds max_doc_positions " +
                    std::to_string(cfg.max_doc_positions));
    if (inst.span && (inst.span->start > inst.span->end || inst.span->end >= inst.sentence_length()))
        throw Error("span outside the sentence");
}

Matrix embed(const TrainingInstance& inst, const Parameters& params, const ModelConfig& cfg) {
    validate_instance(inst, cfg, static_cast<std::size_t>(params.token_embedding.rows()));
    const Index n = static_cast<Index>(inst.token_ids.size());
    Matrix out(n, params.token_embedding.cols());
    const auto doc_row = params.doc_pos_embedding.row(static_cast<Index>(inst.doc_position));
    for (Index i = 0; i < n; ++i)
        out.row(i) = params.token_embedding.row(static_cast<Index>(inst.token_ids[static_cast<std::size_t>(i)])) +
                     params.sentence_pos_embedding.row(i) + doc_row;
    return out;
}

Matrix encode(const Matrix& embedded, const Parameters& params, const ModelConfig& cfg, AttentionTrace* trace) {
    ForwardCache cache;
    return run_encoder(embedded, params, cfg, cache, {}, trace);
}

Prediction heads(const Matrix& h, const Parameters& params) { return heads_impl(h, params, nullptr); }

Prediction forward(const TrainingInstance& inst, const Parameters& params, const ModelConfig& cfg) {
    return heads(encode(embed(inst, params, cfg), params, cfg), params);
}

double loss(const Prediction& pred, const TrainingInstance& inst, double lambda) {
    double sent = cross_entropy(inst.label() == 1 ? pred.sentence_prob : 1.0 - pred.sentence_prob);
    if (!inst.span) return sent;
    const auto start = static_cast<Index>(inst.span->start);
    const auto end = static_cast<Index>(inst.span->end);
    if (start >= pred.start_dist.size() || end >= pred.end_dist.size())
        throw Error("loss: span outside the predicted distributions");
    return lambda * (cross_entropy(pred.start_dist(start)) + cross_entropy(pred.end_dist(end))) + sent;
}

double mean_loss(std::span<const TrainingInstance> batch, const Parameters& params, const ModelConfig& cfg) {
    if (batch.empty()) throw Error("mean_loss: empty batch");
    double total = 0.0;
    for (const auto& inst : batch) total += loss(forward(inst, params, cfg), inst, cfg.lambda);
    return total / static_cast<double>(batch.size());
}

GradientResult grad(std::span<const TrainingInstance> batch, const Parameters& params, const ModelConfig& cfg,
                    std::mt19937_64* dropout_rng) {
    if (batch.empty()) throw Error("grad: empty batch");
    GradientResult res{zero_parameters(cfg, static_cast<std::size_t>(params.token_embedding.rows())), 0.0};
    Parameters& g = res.gradient;
    const double scale = 1.0 / static_cast<double>(batch.size());
    const DropoutContext dropout{cfg.dropout_p, dropout_rng};

    ForwardCache cache;
    for (const auto& inst : batch) {
        Matrix embedded = embed(inst, params, cfg);
        cache.h = run_encoder(embedded, params, cfg, cache, dropout, nullptr);
        cache.pred = heads_impl(cache.h, params, &cache.sentence_probs);
        res.mean_loss += loss(cache.pred, inst, cfg.lambda) * scale;

        const Matrix& h = cache.h;
        const Index n = h.rows();
        Matrix dh = Matrix::Zero(n, h.cols());

        Eigen::VectorXd d_sent = cache.sentence_probs;
        d_sent(inst.label()) -= 1.0;
        d_sent *= scale;
        g.sentence_head += h.row(0).transpose() * d_sent.transpose();
        g.sentence_head_bias += d_sent.transpose();
        dh.row(0) = (params.sentence_head * d_sent).transpose();

        if (inst.span) {
            const double weight = cfg.lambda * scale;
            Matrix d_span(n - 1, 2);
            d_span.col(0) = cache.pred.start_dist;
            d_span(static_cast<Index>(inst.span->start), 0) -= 1.0;
            d_span.col(1) = cache.pred.end_dist;
            d_span(static_cast<Index>(inst.span->end), 1) -= 1.0;
            d_span *= weight;
            g.span_head += h.bottomRows(n - 1).transpose() * d_span;
            dh.bottomRows(n - 1) = d_span * params.span_head.transpose();
        }

        Matrix dx = layer_norm_backward(dh, cache.final_ln, params.final_ln_gain, g.final_ln_gain, g.final_ln_bias);
        for (std::size_t i = params.layers.size(); i-- > 0;)
            dx = layer_backward(dx, params.layers[i], cache.layers[i], cfg, g.layers[i]);

        const auto doc_row = static_cast<Index>(inst.doc_position);
        for (Index i = 0; i < n; ++i) {
            g.token_embedding.row(static_cast<Index>(inst.token_ids[static_cast<std::size_t>(i)])) += dx.row(i);
            g.sentence_pos_embedding.row(i) += dx.row(i);
            g.doc_pos_embedding.row(doc_row) += dx.row(i);
        }
    }
    return res;
}

}  // namespace highlight::extractor
