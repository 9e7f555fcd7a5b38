#include "highlight/extractor/inference.hpp"

#include "highlight/error.hpp"
#include "highlight/extractor/instances.hpp"

namespace highlight::extractor {

namespace {

std::size_t argmax_from(const Eigen::VectorXd& v, std::size_t from) {
    std::size_t best = from;
    for (auto i = static_cast<Eigen::Index>(from) + 1; i < v.size(); ++i)
        if (v(i) > v(static_cast<Eigen::Index>(best))) best = static_cast<std::size_t>(i);
    return best;
}

}  // namespace

std::size_t repair_end(std::size_t start, const Eigen::VectorXd& end_dist) {
    if (start >= static_cast<std::size_t>(end_dist.size()))
        throw Error("repair_end: start " + std::to_string(start) + " outside a distribution of size " +
                    std::to_string(end_dist.size()));
    std::size_t global = argmax_from(end_dist, 0);
    return global >= start ? global : argmax_from(end_dist, start);
}

SentenceAnnotation decide(const Prediction& pred, const TrainingInstance& inst, double threshold) {
    SentenceAnnotation ann{inst.doc_id, inst.sentence_index, std::nullopt};
    if (pred.sentence_prob >= threshold) {
        std::size_t start = argmax_from(pred.start_dist, 0);
        ann.segment = Run{start, repair_end(start, pred.end_dist)};
    }
    return ann;
}

SentenceAnnotation predict_sentence(const TrainingInstance& inst, const Parameters& params, const ModelConfig& cfg,
                                    double threshold) {
    return decide(forward(inst, params, cfg), inst, threshold);
}

std::vector<SentenceAnnotation> predict_document(const Document& doc, const Vocab& vocab, const Parameters& params,
                                                 const ModelConfig& cfg, double threshold) {
    std::vector<SentenceAnnotation> out;
    for (const auto& inst : document_instances(doc, vocab, cfg))
        out.push_back(predict_sentence(inst, params, cfg, threshold));
    return out;
}

EvaluationSummary evaluate_instances(const std::vector<TrainingInstance>& gold, const Parameters& params,
                                     const ModelConfig& cfg, double threshold) {
    EvaluationSummary s;
    std::size_t correct = 0, exact = 0;
    for (const auto& inst : gold) {
        SentenceAnnotation pred = predict_sentence(inst, params, cfg, threshold);
        ++s.sentences;
        if (pred.label() == inst.label()) ++correct;
        if (inst.span) {
            ++s.positives;
            if (pred.segment && *pred.segment == *inst.span) ++exact;
        }
    }
    if (s.sentences) s.sentence_accuracy = static_cast<double>(correct) / static_cast<double>(s.sentences);
    if (s.positives) s.exact_span_match = static_cast<double>(exact) / static_cast<double>(s.positives);
    return s;
}

}  // namespace highlight::extractor
