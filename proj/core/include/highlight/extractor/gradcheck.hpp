#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "highlight/extractor/config.hpp"
#include "highlight/extractor/model.hpp"
#include "highlight/extractor/parameters.hpp"

namespace highlight::extractor {

struct GradCheckOptions {
    double step = 1e-5;
    // Denominator floor of the relative error |a - n| / max(|a|, |n|, floor),
    // so entries whose true gradient is zero are judged on absolute error.
    double floor = 1e-6;
};

struct GradCheckEntry {
    std::string tensor;
    long row = 0;
    long col = 0;
    double analytic = 0.0;
    double numeric = 0.0;
    double rel_error = 0.0;
};

struct GradCheckReport {
    std::size_t checked = 0;
    double max_rel_error = 0.0;
    GradCheckEntry worst;
};

double relative_error(double analytic, double numeric, double floor);

// Compares grad() against central differences of mean_loss() on every scalar
// parameter. Dropout is never applied.
GradCheckReport gradient_check(std::span<const TrainingInstance> batch, const Parameters& params,
                               const ModelConfig& cfg, const GradCheckOptions& opts = {});

// d = 8, one layer, two heads, sequences of [CLS] + 5 tokens.
ModelConfig tiny_gradcheck_config(std::uint64_t seed);

struct GradCheckProblem {
    ModelConfig cfg;
    Parameters params;
    std::vector<TrainingInstance> batch;
};

// Random parameters (layer-norm gains perturbed away from 1) and a mixed
// positive/negative batch for the tiny configuration.
GradCheckProblem make_gradcheck_problem(std::uint64_t seed);

}  // namespace highlight::extractor
