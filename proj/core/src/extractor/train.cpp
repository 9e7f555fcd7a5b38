#include "highlight/extractor/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace highlight::extractor {

namespace {

class Updater {
public:
    Updater(const Parameters& like, const ModelConfig& cfg, const TrainOptions& opts) : opts_(opts) {
        if (opts.optimizer == Optimizer::Adam) {
            first_ = zero_parameters(cfg, static_cast<std::size_t>(like.token_embedding.rows()));
            second_ = first_;
        }
    }

    void step(Parameters& params, const Parameters& gradient) {
        const double lr = opts_.learning_rate;
        if (opts_.optimizer == Optimizer::GradientDescent) {
            for_each_tensor_pair(params, gradient, [&](Matrix& p, const Matrix& g) { p -= lr * g; });
            return;
        }
        ++t_;
        const double b1 = opts_.adam_beta1, b2 = opts_.adam_beta2;
        for_each_tensor_pair(first_, gradient, [&](Matrix& m, const Matrix& g) { m = b1 * m + (1.0 - b1) * g; });
        for_each_tensor_pair(second_, gradient,
                             [&](Matrix& v, const Matrix& g) { v = b2 * v + (1.0 - b2) * g.cwiseProduct(g); });
        const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
        const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
        std::vector<Matrix*> targets;
        for_each_tensor(params, [&](const std::string&, Matrix& p) { targets.push_back(&p); });
        std::size_t k = 0;
        for_each_tensor_pair(first_, second_, [&](Matrix& m, const Matrix& v) {
            Matrix& p = *targets[k++];
            p.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + opts_.adam_epsilon);
        });
    }

private:
    TrainOptions opts_;
    Parameters first_, second_;
    std::size_t t_ = 0;
};

void check_finite(double value, const char* what, std::size_t epoch) {
    if (!std::isfinite(value))
        throw TrainingDiverged(std::string(what) + " became non-finite at epoch " + std::to_string(epoch));
}

}  // namespace

TrainResult train(std::span<const TrainingInstance> data, std::span<const TrainingInstance> valid,
                  std::size_t vocab_size, const ModelConfig& cfg, const TrainOptions& opts,
                  const EpochCallback& on_epoch) {
    return train_from(init_parameters(cfg, vocab_size), data, valid, cfg, opts, on_epoch);
}

TrainResult train_from(Parameters params, std::span<const TrainingInstance> data,
                       std::span<const TrainingInstance> valid, const ModelConfig& cfg, const TrainOptions& opts,
                       const EpochCallback& on_epoch) {
    cfg.validate();
    if (data.empty()) throw Error("train: no training instances");
    if (!(opts.learning_rate > 0.0)) throw Error("train: learning rate must be positive");
    const auto vocab_size = static_cast<std::size_t>(params.token_embedding.rows());
    for (const auto& inst : data) validate_instance(inst, cfg, vocab_size);
    for (const auto& inst : valid) validate_instance(inst, cfg, vocab_size);

    std::span<const TrainingInstance> monitor = valid.empty() ? data : valid;
    std::mt19937_64 shuffle_rng(cfg.seed ^ 0x5eed5eedULL);
    std::mt19937_64 dropout_rng(cfg.seed + 1);
    std::mt19937_64* dropout = cfg.dropout_p > 0.0 ? &dropout_rng : nullptr;

    Updater updater(params, cfg, opts);
    TrainResult result;
    result.params = params;
    result.best_valid_loss = mean_loss(monitor, params, cfg);
    check_finite(result.best_valid_loss, "validation loss", 0);

    const std::size_t batch = opts.batch_size == 0 ? data.size() : std::min(opts.batch_size, data.size());
    std::vector<TrainingInstance> shuffled(data.begin(), data.end());
    std::size_t since_best = 0;

    for (std::size_t epoch = 1; epoch <= opts.max_epochs; ++epoch) {
        EpochRecord rec{epoch, 0.0, 0.0};
        if (batch == data.size()) {
            GradientResult g = grad(data, params, cfg, dropout);
            check_finite(g.mean_loss, "training loss", epoch);
            rec.train_loss = g.mean_loss;
            updater.step(params, g.gradient);
        } else {
            std::shuffle(shuffled.begin(), shuffled.end(), shuffle_rng);
            double total = 0.0;
            for (std::size_t off = 0; off < shuffled.size(); off += batch) {
                std::span<const TrainingInstance> mb(shuffled.data() + off, std::min(batch, shuffled.size() - off));
                GradientResult g = grad(mb, params, cfg, dropout);
                check_finite(g.mean_loss, "training loss", epoch);
                total += g.mean_loss * static_cast<double>(mb.size());
                updater.step(params, g.gradient);
            }
            rec.train_loss = total / static_cast<double>(shuffled.size());
        }
        if (!all_finite(params)) throw TrainingDiverged("parameters became non-finite at epoch " + std::to_string(epoch));
        rec.valid_loss = mean_loss(monitor, params, cfg);
        check_finite(rec.valid_loss, "validation loss", epoch);
        result.history.push_back(rec);
        if (on_epoch) on_epoch(rec);

        if (rec.valid_loss < result.best_valid_loss) {
            result.best_valid_loss = rec.valid_loss;
            result.best_epoch = epoch;
            result.params = params;
            since_best = 0;
        } else if (++since_best >= opts.patience) {
            break;
        }
    }
    return result;
}

}  // namespace highlight::extractor
