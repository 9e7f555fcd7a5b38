#include "highlight/extractor/instances.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "highlight/error.hpp"

namespace highlight::extractor {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<LabelledSentence> join_annotations(const std::vector<Document>& docs,
                                               const std::vector<SentenceAnnotation>& annotations) {
    std::map<std::string, const Document*> by_id;
    for (const auto& d : docs) by_id.emplace(d.doc_id, &d);
    std::map<std::pair<std::string, std::size_t>, const SentenceAnnotation*> index;
    for (const auto& a : annotations) {
        auto it = by_id.find(a.doc_id);
        if (it == by_id.end()) throw Error("annotation refers to unknown document '" + a.doc_id + "'");
        validate_annotation(a, *it->second);
        if (!index.emplace(std::make_pair(a.doc_id, a.sentence_index), &a).second)
            throw Error("duplicate annotation for '" + a.doc_id + "' sentence " + std::to_string(a.sentence_index));
    }
    std::vector<LabelledSentence> out;
    for (const auto& d : docs) {
        for (const auto& s : d.sentences) {
            auto it = index.find({d.doc_id, s.position});
            if (it == index.end())
                throw Error("document '" + d.doc_id + "' sentence " + std::to_string(s.position) + " has no annotation");
            out.push_back({*it->second, s.tokens});
        }
    }
    return out;
}

std::optional<TrainingInstance> make_instance(const std::string& doc_id, std::size_t sentence_index,
                                              const TokenList& tokens, const std::optional<Run>& span,
                                              const Vocab& vocab, const ModelConfig& cfg) {
    if (tokens.empty()) throw Error("cannot encode an empty sentence");
    const std::size_t kept = std::min(tokens.size(), cfg.max_sentence_len);
    TrainingInstance inst;
    inst.doc_id = doc_id;
    inst.sentence_index = sentence_index;
    inst.doc_position = std::min(sentence_index, cfg.max_doc_positions - 1);
    inst.token_ids.reserve(kept + 1);
    inst.token_ids.push_back(Vocab::kCls);
    for (std::size_t i = 0; i < kept; ++i) inst.token_ids.push_back(vocab.id(tokens[i]));
    if (span) {
        if (span->start > span->end || span->end >= tokens.size())
            throw Error("span outside sentence " + std::to_string(sentence_index) + " of '" + doc_id + "'");
        if (span->start >= kept) return std::nullopt;
        inst.span = Run{span->start, std::min(span->end, kept - 1)};
    }
    return inst;
}

InstanceSet make_instances(const std::vector<LabelledSentence>& data, const Vocab& vocab, const ModelConfig& cfg) {
    InstanceSet out;
    out.instances.reserve(data.size());
    for (const auto& ls : data) {
        auto inst = make_instance(ls.annotation.doc_id, ls.annotation.sentence_index, ls.tokens,
                                  ls.annotation.segment, vocab, cfg);
        if (inst)
            out.instances.push_back(std::move(*inst));
        else
            ++out.dropped;
    }
    return out;
}

std::vector<TrainingInstance> document_instances(const Document& doc, const Vocab& vocab, const ModelConfig& cfg) {
    std::vector<TrainingInstance> out;
    out.reserve(doc.sentences.size());
    for (const auto& s : doc.sentences)
        out.push_back(*make_instance(doc.doc_id, s.position, s.tokens, std::nullopt, vocab, cfg));
    return out;
}

std::vector<LabelledSentence> read_labelled(std::istream& in, const std::string& source) {
    std::vector<LabelledSentence> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            json j = json::parse(line);
            if (!j.is_object() || !j.contains("tokens") || !j["tokens"].is_array())
                throw Error("record needs a 'tokens' array");
            TokenList tokens;
            for (const auto& t : j["tokens"]) {
                if (!t.is_string() || t.get_ref<const std::string&>().empty())
                    throw Error("'tokens' must hold non-empty strings");
                tokens.push_back(t.get<std::string>());
            }
            if (tokens.empty()) throw Error("empty sentence");
            // The annotation fields share the annotation schema; reuse its parser.
            std::istringstream one(line);
            auto ann = read_annotations(one, source);
            if (ann.size() != 1) throw Error("expected exactly one annotation");
            if (ann[0].segment && ann[0].segment->end >= tokens.size()) throw Error("segment outside the sentence");
            out.push_back({std::move(ann[0]), std::move(tokens)});
        } catch (const ParseError& e) {
            throw ParseError(source, lineno, e.what());
        } catch (const json::exception& e) {
            throw ParseError(source, lineno, std::string("malformed record: ") + e.what());
        } catch (const Error& e) {
            throw ParseError(source, lineno, e.what());
        }
    }
    return out;
}

std::vector<LabelledSentence> load_labelled(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open training data " + path.string());
    return read_labelled(in, path.string());
}

void write_labelled(std::ostream& out, const std::vector<LabelledSentence>& data) {
    for (const auto& ls : data) {
        const auto& a = ls.annotation;
        ordered_json j = {{"doc_id", a.doc_id}, {"sentence_index", a.sentence_index}, {"tokens", ls.tokens},
                          {"label", a.label()}};
        j["start"] = a.segment ? ordered_json(a.segment->start) : ordered_json(nullptr);
        j["end"] = a.segment ? ordered_json(a.segment->end) : ordered_json(nullptr);
        out << j.dump() << '\n';
    }
}

void save_labelled(const std::filesystem::path& path, const std::vector<LabelledSentence>& data) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write training data " + path.string());
    write_labelled(out, data);
}

}  // namespace highlight::extractor
