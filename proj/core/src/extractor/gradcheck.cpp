#include "highlight/extractor/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "highlight/extractor/vocab.hpp"

namespace highlight::extractor {

double relative_error(double analytic, double numeric, double floor) {
    double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
    return std::abs(analytic - numeric) / denom;
}

GradCheckReport gradient_check(std::span<const TrainingInstance> batch, const Parameters& params,
                               const ModelConfig& cfg, const GradCheckOptions& opts) {
    ModelConfig det = cfg;
    det.dropout_p = 0.0;
    const Parameters analytic = grad(batch, params, det).gradient;

    std::vector<const Matrix*> analytic_tensors;
    for_each_tensor(analytic, [&](const std::string&, const Matrix& m) { analytic_tensors.push_back(&m); });

    Parameters probe = params;
    GradCheckReport report;
    std::size_t k = 0;
    for_each_tensor(probe, [&](const std::string& name, Matrix& m) {
        const Matrix& a = *analytic_tensors[k++];
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                const double saved = m(i, j);
                m(i, j) = saved + opts.step;
                const double up = mean_loss(batch, probe, det);
                m(i, j) = saved - opts.step;
                const double down = mean_loss(batch, probe, det);
                m(i, j) = saved;
                const double numeric = (up - down) / (2.0 * opts.step);
                const double err = relative_error(a(i, j), numeric, opts.floor);
                ++report.checked;
                if (err > report.max_rel_error || report.checked == 1) {
                    report.max_rel_error = err;
                    report.worst = {name, static_cast<long>(i), static_cast<long>(j), a(i, j), numeric, err};
                }
            }
        }
    });
    return report;
}

ModelConfig tiny_gradcheck_config(std::uint64_t seed) {
    ModelConfig cfg;
    cfg.embed_dim = 8;
    cfg.encoder_layers = 1;
    cfg.attention_heads = 2;
    cfg.ff_dim = 16;
    cfg.max_sentence_len = 5;
    cfg.max_doc_positions = 4;
    cfg.lambda = 0.1;
    cfg.dropout_p = 0.0;
    cfg.init_range = 0.5;
    cfg.seed = seed;
    return cfg;
}

GradCheckProblem make_gradcheck_problem(std::uint64_t seed) {
    GradCheckProblem prob;
    prob.cfg = tiny_gradcheck_config(seed);
    constexpr std::size_t kVocab = 12;
    prob.params = init_parameters(prob.cfg, kVocab);

    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> jitter(-0.5, 0.5);
    for_each_tensor(prob.params, [&](const std::string& name, Matrix& m) {
        if (name.find("ln") == std::string::npos) return;
        bool gain = name.ends_with("gain");
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = (gain ? 1.0 : 0.0) + jitter(rng);
    });

    std::uniform_int_distribution<TokenId> token(2, kVocab - 1);
    std::uniform_int_distribution<std::size_t> doc_pos(0, prob.cfg.max_doc_positions - 1);
    const std::size_t len = prob.cfg.max_sentence_len;  // sequence length 6 with [CLS]
    const std::optional<Run> spans[] = {Run{1, 3}, std::nullopt, Run{3, 3}, Run{0, 4}};
    std::size_t idx = 0;
    for (const auto& span : spans) {
        TrainingInstance inst;
        inst.doc_id = "gradcheck";
        inst.sentence_index = idx++;
        inst.doc_position = doc_pos(rng);
        inst.token_ids.push_back(Vocab::kCls);
        for (std::size_t i = 0; i < len; ++i) inst.token_ids.push_back(token(rng));
        inst.span = span;
        prob.batch.push_back(std::move(inst));
    }
    return prob;
}

}  // namespace highlight::extractor
