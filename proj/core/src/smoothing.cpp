#include "highlight/smoothing.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "highlight/error.hpp"

namespace highlight {

using nlohmann::json;
using nlohmann::ordered_json;

void SmoothingConfig::validate() const {
    if (min_segment_tokens < 1) throw Error("min_segment_tokens must be at least 1");
}

std::map<std::size_t, LocalSelection> per_sentence_selection(const AlignedWordSet& aligned, const Document& doc) {
    TokenIndex index(doc);
    std::map<std::size_t, LocalSelection> out;
    for (std::size_t flat : aligned.indices) {
        TokenLocation loc = index.locate(flat);
        out[loc.sentence_index].insert(loc.local_index);
    }
    return out;
}

LocalSelection fill_gaps(const LocalSelection& selected, std::size_t sentence_len, const SmoothingConfig& cfg) {
    LocalSelection out = selected;
    if (selected.empty()) return out;
    const std::size_t gap_limit = cfg.gap_threshold;

    auto prev = selected.begin();
    for (auto cur = std::next(prev); cur != selected.end(); prev = cur, ++cur) {
        std::size_t gap = *cur - *prev - 1;
        if (gap > 0 && gap < gap_limit)
            for (std::size_t i = *prev + 1; i < *cur; ++i) out.insert(i);
    }

    if (cfg.extend_to_boundary) {
        std::size_t first = *selected.begin();
        std::size_t last = *selected.rbegin();
        if (first > 0 && first < gap_limit)
            for (std::size_t i = 0; i < first; ++i) out.insert(i);
        std::size_t trailing = sentence_len > last ? sentence_len - 1 - last : 0;
        if (trailing > 0 && trailing < gap_limit)
            for (std::size_t i = last + 1; i < sentence_len; ++i) out.insert(i);
    }
    return out;
}

std::vector<Run> runs(const LocalSelection& selected) {
    std::vector<Run> out;
    for (std::size_t i : selected) {
        if (!out.empty() && out.back().end + 1 == i)
            out.back().end = i;
        else
            out.push_back({i, i});
    }
    return out;
}

std::optional<Run> select_segment(const std::vector<Run>& candidates, const SmoothingConfig& cfg) {
    if (candidates.empty()) return std::nullopt;
    const Run* best = &candidates.front();
    for (const Run& r : candidates)
        if (r.length() > best->length()) best = &r;  // strict: first run wins ties
    if (best->length() < cfg.min_segment_tokens) return std::nullopt;
    return *best;
}

std::optional<Run> smooth_sentence(const LocalSelection& selected, std::size_t sentence_len,
                                   const SmoothingConfig& cfg) {
    for (std::size_t i : selected)
        if (i >= sentence_len)
            throw Error("selected index " + std::to_string(i) + " outside sentence of length " +
                        std::to_string(sentence_len));
    return select_segment(runs(fill_gaps(selected, sentence_len, cfg)), cfg);
}

std::vector<SentenceAnnotation> annotate_document(const Document& doc, const AlignedWordSet& aligned,
                                                  const SmoothingConfig& cfg) {
    cfg.validate();
    if (!aligned.doc_id.empty() && aligned.doc_id != doc.doc_id)
        throw Error("alignment for '" + aligned.doc_id + "' applied to document '" + doc.doc_id + "'");
    auto selection = per_sentence_selection(aligned, doc);
    std::vector<SentenceAnnotation> out;
    out.reserve(doc.sentences.size());
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
        SentenceAnnotation ann{doc.doc_id, s, std::nullopt};
        if (auto it = selection.find(s); it != selection.end())
            ann.segment = smooth_sentence(it->second, doc.sentences[s].size(), cfg);
        out.push_back(std::move(ann));
    }
    return out;
}

void validate_annotation(const SentenceAnnotation& ann, const Document& doc) {
    if (ann.doc_id != doc.doc_id)
        throw Error("annotation for '" + ann.doc_id + "' checked against document '" + doc.doc_id + "'");
    if (ann.sentence_index >= doc.sentences.size())
        throw Error("annotation for '" + ann.doc_id + "' names sentence " + std::to_string(ann.sentence_index) +
                    " but the document has " + std::to_string(doc.sentences.size()));
    if (ann.segment) {
        const Run& r = *ann.segment;
        if (r.start > r.end || r.end >= doc.sentences[ann.sentence_index].size())
            throw Error("annotation for '" + ann.doc_id + "' sentence " + std::to_string(ann.sentence_index) +
                        " has segment [" + std::to_string(r.start) + ", " + std::to_string(r.end) +
                        "] outside the sentence");
    }
}

namespace {

std::optional<std::size_t> optional_index(const json& j, const char* field) {
    if (!j.contains(field) || j[field].is_null()) return std::nullopt;
    if (!j[field].is_number_integer() || j[field].get<long long>() < 0)
        throw Error(std::string("field '") + field + "' must be a non-negative integer or null");
    return j[field].get<std::size_t>();
}

SentenceAnnotation parse_annotation(const std::string& line) {
    json j = json::parse(line);
    if (!j.is_object()) throw Error("record is not a JSON object");
    for (const char* field : {"doc_id", "sentence_index", "label"})
        if (!j.contains(field)) throw Error(std::string("missing field '") + field + "'");
    if (!j["doc_id"].is_string()) throw Error("field 'doc_id' must be a string");
    if (!j["sentence_index"].is_number_integer() || j["sentence_index"].get<long long>() < 0)
        throw Error("field 'sentence_index' must be a non-negative integer");
    if (!j["label"].is_number_integer()) throw Error("field 'label' must be 0 or 1");
    int label = j["label"].get<int>();
    if (label != 0 && label != 1) throw Error("field 'label' must be 0 or 1");

    SentenceAnnotation ann{j["doc_id"].get<std::string>(), j["sentence_index"].get<std::size_t>(), std::nullopt};
    auto start = optional_index(j, "start");
    auto end = optional_index(j, "end");
    if (label == 1) {
        if (!start || !end) throw Error("positive annotation needs integer 'start' and 'end'");
        if (*start > *end) throw Error("annotation has start > end");
        ann.segment = Run{*start, *end};
    } else if (start || end) {
        throw Error("negative annotation must have null 'start' and 'end'");
    }
    return ann;
}

}  // namespace

std::vector<SentenceAnnotation> read_annotations(std::istream& in, const std::string& source) {
    std::vector<SentenceAnnotation> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(parse_annotation(line));
        } catch (const json::exception& e) {
            throw ParseError(source, lineno, std::string("malformed annotation: ") + e.what());
        } catch (const Error& e) {
            throw ParseError(source, lineno, e.what());
        }
    }
    return out;
}

std::vector<SentenceAnnotation> load_annotations(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open annotation file " + path.string());
    return read_annotations(in, path.string());
}

void write_annotations(std::ostream& out, const std::vector<SentenceAnnotation>& anns) {
    for (const auto& a : anns) {
        ordered_json j = {{"doc_id", a.doc_id}, {"sentence_index", a.sentence_index}, {"label", a.label()}};
        j["start"] = a.segment ? ordered_json(a.segment->start) : ordered_json(nullptr);
        j["end"] = a.segment ? ordered_json(a.segment->end) : ordered_json(nullptr);
        out << j.dump() << '\n';
    }
}

void save_annotations(const std::filesystem::path& path, const std::vector<SentenceAnnotation>& anns) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write annotation file " + path.string());
    write_annotations(out, anns);
}

}  // namespace highlight
