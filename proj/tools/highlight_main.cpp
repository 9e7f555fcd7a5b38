// highlight: command-line front end for annotation, evaluation and the extractor.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "highlight/alignment.hpp"
#include "highlight/corpus.hpp"
#include "highlight/error.hpp"
#include "highlight/extractor/checkpoint.hpp"
#include "highlight/extractor/gradcheck.hpp"
#include "highlight/extractor/inference.hpp"
#include "highlight/extractor/instances.hpp"
#include "highlight/extractor/train.hpp"
#include "highlight/harness.hpp"
#include "highlight/render.hpp"
#include "highlight/rouge.hpp"
#include "highlight/smoothing.hpp"

namespace fs = std::filesystem;
using namespace highlight;

namespace {

struct AnnotateArgs {
    std::string docs, attn, out;
    SmoothingConfig smoothing;
};

struct LabelArgs {
    std::string docs, labels, out, unit = "segm";
};

struct RougeArgs {
    std::string cand, ref, metrics = "1,2,L";
};

struct TrainArgs {
    std::string data, valid, out;
    extractor::ModelConfig model;
    extractor::TrainOptions train;
    std::string optimizer = "gd";
};

struct InferArgs {
    std::string model, docs, out;
    double threshold = extractor::kDefaultThreshold;
};

std::map<std::string, const Document*> by_id(const std::vector<Document>& docs) {
    std::map<std::string, const Document*> out;
    for (const auto& d : docs) out.emplace(d.doc_id, &d);
    return out;
}

int annotate(const AnnotateArgs& a) {
    a.smoothing.validate();
    auto docs = load_corpus(a.docs);
    auto attention = load_attention(a.attn);
    auto index = by_id(docs);
    std::vector<SentenceAnnotation> out;
    std::size_t annotated = 0;
    for (const auto& attn : attention) {
        auto it = index.find(attn.doc_id());
        if (it == index.end()) throw Error("attention for unknown document '" + attn.doc_id() + "'");
        validate_against(attn, *it->second);
        auto anns = annotate_document(*it->second, align_argmax(attn), a.smoothing);
        out.insert(out.end(), anns.begin(), anns.end());
        ++annotated;
    }
    save_annotations(a.out, out);
    std::printf("annotated %zu documents, %zu sentences\n", annotated, out.size());
    return 0;
}

int stats(const LabelArgs& a) {
    auto s = corpus_stats(load_corpus(a.docs), load_annotations(a.labels));
    std::printf("documents                 %zu\n", s.documents);
    std::printf("sentences                 %zu\n", s.total_sentences);
    std::printf("positive sentences        %zu\n", s.positive_sentences);
    std::printf("pos sentence rate         %.4f\n", s.pos_sentence_rate);
    std::printf("gold sentences / doc      %.4f\n", s.mean_gold_sents_per_doc);
    std::printf("gold tokens / doc         %.4f\n", s.mean_gold_tokens_per_doc);
    std::printf("compression rate          %.4f\n", s.compression_rate);
    std::printf("abstract sentences / doc  %.4f\n", s.mean_abstract_sents_per_doc);
    std::printf("abstract tokens / doc     %.4f\n", s.mean_abstract_tokens_per_doc);
    return 0;
}

int oracle(const LabelArgs& a) {
    auto records = build_oracle(load_corpus(a.docs), load_annotations(a.labels), parse_summary_unit(a.unit));
    save_summaries(a.out, records);
    std::printf("wrote %zu summaries\n", records.size());
    return 0;
}

int rouge_cmd(const RougeArgs& a) {
    auto metrics = parse_metric_list(a.metrics);
    auto scores = evaluate(load_summaries(a.cand), load_summaries(a.ref), metrics);
    std::printf("%-8s %9s %9s %9s\n", "metric", "P", "R", "F1");
    for (auto m : metrics) {
        const auto& s = scores.at(m);
        std::printf("%-8s %9.5f %9.5f %9.5f\n", to_string(m).c_str(), s.precision, s.recall, s.f1);
    }
    return 0;
}

int join(const LabelArgs& a) {
    auto joined = extractor::join_annotations(load_corpus(a.docs), load_annotations(a.labels));
    extractor::save_labelled(a.out, joined);
    std::printf("wrote %zu labelled sentences\n", joined.size());
    return 0;
}

int train_cmd(TrainArgs a) {
    using namespace extractor;
    if (a.optimizer == "adam")
        a.train.optimizer = Optimizer::Adam;
    else if (a.optimizer != "gd")
        throw Error("unknown optimizer '" + a.optimizer + "' (expected gd or adam)");
    a.model.validate();
    auto data = load_labelled(a.data);
    auto valid = a.valid.empty() ? std::vector<LabelledSentence>{} : load_labelled(a.valid);
    std::vector<TokenList> sentences;
    for (const auto& s : data) sentences.push_back(s.tokens);
    ExtractorModel model{a.model, Vocab::build(sentences), {}};
    auto train_set = make_instances(data, model.vocab, model.config);
    auto valid_set = make_instances(valid, model.vocab, model.config);
    if (train_set.dropped + valid_set.dropped > 0)
        std::fprintf(stderr, "note: %zu positive sentences dropped by truncation\n",
                     train_set.dropped + valid_set.dropped);
    EpochCallback log;
    if (a.train.verbose)
        log = [](const EpochRecord& r) {
            std::fprintf(stderr, "epoch %zu train %.6f valid %.6f\n", r.epoch, r.train_loss, r.valid_loss);
        };
    auto result = train(train_set.instances, valid_set.instances, model.vocab.size(), model.config, a.train, log);
    model.params = std::move(result.params);
    save_checkpoint(a.out, model);
    std::printf("trained %zu epochs, best epoch %zu, best validation loss %.6f\n", result.history.size(),
                result.best_epoch, result.best_valid_loss);
    if (!valid_set.instances.empty()) {
        auto s = evaluate_instances(valid_set.instances, model.params, model.config);
        std::printf("validation accuracy %.4f, exact span match %.4f\n", s.sentence_accuracy, s.exact_span_match);
    }
    return 0;
}

int infer(const InferArgs& a) {
    auto model = extractor::load_checkpoint(a.model);
    auto docs = load_corpus(a.docs);
    std::vector<SentenceAnnotation> out;
    for (const auto& doc : docs) {
        auto anns = extractor::predict_document(doc, model.vocab, model.params, model.config, a.threshold);
        out.insert(out.end(), anns.begin(), anns.end());
    }
    save_annotations(a.out, out);
    std::printf("predicted %zu sentences, compression ratio %.4f\n", out.size(), compression_ratio(out, docs));
    return 0;
}

int gradcheck(std::uint64_t seed) {
    auto problem = extractor::make_gradcheck_problem(seed);
    auto report = extractor::gradient_check(problem.batch, problem.params, problem.cfg);
    std::printf("checked %zu parameters, max relative error %.3e at %s(%ld,%ld)\n", report.checked,
                report.max_rel_error, report.worst.tensor.c_str(), report.worst.row, report.worst.col);
    if (report.max_rel_error >= 1e-4) {
        std::fprintf(stderr, "highlight: gradient check failed\n");
        return 1;
    }
    return 0;
}

int render(const LabelArgs& a) {
    auto paths = write_highlight_pages(a.out, load_corpus(a.docs), load_annotations(a.labels));
    std::printf("wrote %zu pages to %s\n", paths.size(), a.out.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sub-sentence highlight annotation, extraction and evaluation"};
    app.require_subcommand(1);
    std::function<int()> action;

    AnnotateArgs ann;
    auto* c = app.add_subcommand("annotate", "Derive gold labels from documents and attention matrices");
    c->add_option("--docs", ann.docs, "Document JSONL")->required()->check(CLI::ExistingFile);
    c->add_option("--attn", ann.attn, "Attention JSONL")->required()->check(CLI::ExistingFile);
    c->add_option("--out", ann.out, "Output annotation JSONL")->required();
    c->add_option("--gap", ann.smoothing.gap_threshold, "Bridge gaps shorter than this")->capture_default_str();
    c->add_option("--min-len", ann.smoothing.min_segment_tokens, "Shortest admissible segment")
        ->capture_default_str();
    c->add_flag("--extend-to-boundary", ann.smoothing.extend_to_boundary, "Let runs near an edge absorb it");
    c->callback([&] { action = [&] { return annotate(ann); }; });

    LabelArgs lab;
    auto* s = app.add_subcommand("stats", "Corpus statistics for annotated documents");
    s->add_option("--docs", lab.docs, "Document JSONL")->required()->check(CLI::ExistingFile);
    s->add_option("--labels", lab.labels, "Annotation JSONL")->required()->check(CLI::ExistingFile);
    s->callback([&] { action = [&] { return stats(lab); }; });

    auto* o = app.add_subcommand("oracle", "Oracle summaries from gold labels");
    o->add_option("--docs", lab.docs, "Document JSONL")->required()->check(CLI::ExistingFile);
    o->add_option("--labels", lab.labels, "Annotation JSONL")->required()->check(CLI::ExistingFile);
    o->add_option("--unit", lab.unit, "sent or segm")->required()->check(CLI::IsMember({"sent", "segm"}));
    o->add_option("--out", lab.out, "Output summary JSONL")->required();
    o->callback([&] { action = [&] { return oracle(lab); }; });

    RougeArgs rg;
    auto* r = app.add_subcommand("rouge", "Macro-averaged ROUGE of candidate summaries");
    r->add_option("--cand", rg.cand, "Candidate summary JSONL")->required()->check(CLI::ExistingFile);
    r->add_option("--ref", rg.ref, "Reference summary JSONL")->required()->check(CLI::ExistingFile);
    r->add_option("--metrics", rg.metrics, "Comma-separated list of 1, 2, L")->capture_default_str();
    r->callback([&] { action = [&] { return rouge_cmd(rg); }; });

    auto* j = app.add_subcommand("join", "Attach sentence tokens to annotations for training");
    j->add_option("--docs", lab.docs, "Document JSONL")->required()->check(CLI::ExistingFile);
    j->add_option("--labels", lab.labels, "Annotation JSONL")->required()->check(CLI::ExistingFile);
    j->add_option("--out", lab.out, "Output labelled JSONL")->required();
    j->callback([&] { action = [&] { return join(lab); }; });

    TrainArgs tr;
    auto* t = app.add_subcommand("train", "Train the sentence and span extractor");
    t->add_option("--data", tr.data, "Labelled training JSONL")->required()->check(CLI::ExistingFile);
    t->add_option("--valid", tr.valid, "Labelled validation JSONL")->check(CLI::ExistingFile);
    t->add_option("--out", tr.out, "Output model file")->required();
    t->add_option("--lambda", tr.model.lambda, "Weight of the span loss")->capture_default_str();
    t->add_option("--lr", tr.train.learning_rate, "Step size")->capture_default_str();
    t->add_option("--seed", tr.model.seed, "Random seed")->capture_default_str();
    t->add_option("--epochs", tr.train.max_epochs, "Maximum epochs")->capture_default_str();
    t->add_option("--patience", tr.train.patience, "Epochs without improvement before stopping")
        ->capture_default_str();
    t->add_option("--batch", tr.train.batch_size, "Minibatch size, 0 for full batch")->capture_default_str();
    t->add_option("--optimizer", tr.optimizer, "gd or adam")->capture_default_str();
    t->add_option("--dim", tr.model.embed_dim, "Embedding width")->capture_default_str();
    t->add_option("--layers", tr.model.encoder_layers, "Encoder layers")->capture_default_str();
    t->add_option("--heads", tr.model.attention_heads, "Attention heads")->capture_default_str();
    t->add_option("--ff", tr.model.ff_dim, "Feed-forward width")->capture_default_str();
    t->add_option("--max-len", tr.model.max_sentence_len, "Tokens kept per sentence")->capture_default_str();
    t->add_option("--dropout", tr.model.dropout_p, "Dropout probability")->capture_default_str();
    t->add_flag("--verbose", tr.train.verbose, "Log per-epoch losses");
    t->callback([&] { action = [&] { return train_cmd(tr); }; });

    InferArgs inf;
    auto* i = app.add_subcommand("infer", "Predict highlights with a trained model");
    i->add_option("--model", inf.model, "Model file")->required()->check(CLI::ExistingFile);
    i->add_option("--docs", inf.docs, "Document JSONL")->required()->check(CLI::ExistingFile);
    i->add_option("--out", inf.out, "Output annotation JSONL")->required();
    i->add_option("--threshold", inf.threshold, "Sentence probability needed for a highlight")
        ->capture_default_str();
    i->callback([&] { action = [&] { return infer(inf); }; });

    std::uint64_t seed = 1;
    auto* g = app.add_subcommand("gradcheck", "Finite-difference check of the extractor gradient");
    g->add_option("--seed", seed, "Random seed")->capture_default_str();
    g->callback([&] { action = [&] { return gradcheck(seed); }; });

    auto* h = app.add_subcommand("render", "Static HTML pages with highlights");
    h->add_option("--docs", lab.docs, "Document JSONL")->required()->check(CLI::ExistingFile);
    h->add_option("--labels", lab.labels, "Annotation or prediction JSONL")->required()->check(CLI::ExistingFile);
    h->add_option("--out", lab.out, "Output directory")->required();
    h->callback([&] { action = [&] { return render(lab); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "highlight: %s\n", e.what());
        return 2;
    }
    try {
        return action();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "highlight: %s\n", e.what());
        return 1;
    }
}
