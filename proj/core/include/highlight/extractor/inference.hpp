#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "highlight/corpus.hpp"
#include "highlight/extractor/config.hpp"
#include "highlight/extractor/model.hpp"
#include "highlight/extractor/parameters.hpp"
#include "highlight/extractor/vocab.hpp"
#include "highlight/smoothing.hpp"

namespace highlight::extractor {

inline constexpr double kDefaultThreshold = 0.5;

// End index for a given start: the global argmax of end_dist if it is at or
// after start, otherwise the argmax over positions >= start. Ties go to the
// lowest index. Throws if start is outside end_dist.
std::size_t repair_end(std::size_t start, const Eigen::VectorXd& end_dist);

// Positive iff sentence_prob >= threshold; a positive sentence gets
// (argmax start, repaired end).
SentenceAnnotation decide(const Prediction& pred, const TrainingInstance& inst, double threshold = kDefaultThreshold);

SentenceAnnotation predict_sentence(const TrainingInstance& inst, const Parameters& params, const ModelConfig& cfg,
                                    double threshold = kDefaultThreshold);

std::vector<SentenceAnnotation> predict_document(const Document& doc, const Vocab& vocab, const Parameters& params,
                                                 const ModelConfig& cfg, double threshold = kDefaultThreshold);

struct EvaluationSummary {
    std::size_t sentences = 0;
    std::size_t positives = 0;           // gold positives
    double sentence_accuracy = 0.0;
    // Fraction of gold positives predicted positive with exactly the gold span.
    double exact_span_match = 0.0;
};

EvaluationSummary evaluate_instances(const std::vector<TrainingInstance>& gold, const Parameters& params,
                                     const ModelConfig& cfg, double threshold = kDefaultThreshold);

}  // namespace highlight::extractor
