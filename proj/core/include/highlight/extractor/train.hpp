#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "highlight/error.hpp"
#include "highlight/extractor/config.hpp"
#include "highlight/extractor/model.hpp"
#include "highlight/extractor/parameters.hpp"

namespace highlight::extractor {

class TrainingDiverged : public Error {
public:
    using Error::Error;
};

struct EpochRecord {
    std::size_t epoch = 0;
    // Mean loss over the training set at the parameters the epoch started from.
    double train_loss = 0.0;
    // Mean validation loss after the epoch's updates.
    double valid_loss = 0.0;
};

struct TrainResult {
    Parameters params;  // best-validation parameters
    std::size_t best_epoch = 0;  // 0 means the initial parameters were never beaten
    double best_valid_loss = 0.0;
    std::vector<EpochRecord> history;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

// Gradient descent (or Adam) from init_parameters(cfg, vocab_size), keeping the
// parameters with the lowest validation loss and stopping after
// opts.patience epochs without improvement. With an empty validation set the
// training loss is used instead. Deterministic for a fixed cfg.seed.
TrainResult train(std::span<const TrainingInstance> data, std::span<const TrainingInstance> valid,
                  std::size_t vocab_size, const ModelConfig& cfg, const TrainOptions& opts,
                  const EpochCallback& on_epoch = {});

// Same, starting from the given parameters.
TrainResult train_from(Parameters init, std::span<const TrainingInstance> data,
                       std::span<const TrainingInstance> valid, const ModelConfig& cfg, const TrainOptions& opts,
                       const EpochCallback& on_epoch = {});

}  // namespace highlight::extractor
