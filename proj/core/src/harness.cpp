#include "highlight/harness.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "highlight/error.hpp"

namespace highlight {

using nlohmann::json;
using nlohmann::ordered_json;

SummaryUnit parse_summary_unit(const std::string& name) {
    if (name == "sent" || name == "sentence") return SummaryUnit::Sentence;
    if (name == "segm" || name == "segment") return SummaryUnit::Segment;
    throw Error("unknown summary unit '" + name + "' (expected sent or segm)");
}

std::string to_string(SummaryUnit unit) { return unit == SummaryUnit::Sentence ? "sent" : "segm"; }

std::vector<DocumentAnnotations> group_complete(const std::vector<Document>& docs,
                                                const std::vector<SentenceAnnotation>& annotations) {
    std::unordered_map<std::string, std::size_t> slot;
    for (std::size_t i = 0; i < docs.size(); ++i) slot.emplace(docs[i].doc_id, i);

    std::vector<std::vector<const SentenceAnnotation*>> by_sentence(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) by_sentence[i].assign(docs[i].sentences.size(), nullptr);
    for (const auto& a : annotations) {
        auto it = slot.find(a.doc_id);
        if (it == slot.end()) throw Error("annotation refers to unknown document '" + a.doc_id + "'");
        const Document& doc = docs[it->second];
        validate_annotation(a, doc);
        auto& cell = by_sentence[it->second][a.sentence_index];
        if (cell) throw Error("duplicate annotation for '" + a.doc_id + "' sentence " + std::to_string(a.sentence_index));
        cell = &a;
    }

    std::vector<DocumentAnnotations> out(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        out[i].reserve(by_sentence[i].size());
        for (std::size_t s = 0; s < by_sentence[i].size(); ++s) {
            if (!by_sentence[i][s])
                throw Error("document '" + docs[i].doc_id + "' sentence " + std::to_string(s) + " has no annotation");
            out[i].push_back(*by_sentence[i][s]);
        }
    }
    return out;
}

TokenList materialize(const Document& doc, std::span<const SentenceAnnotation> annotations, SummaryUnit unit) {
    TokenList out;
    for (const auto& a : annotations) {
        if (!a.segment) continue;
        validate_annotation(a, doc);
        const auto& tokens = doc.sentences[a.sentence_index].tokens;
        if (unit == SummaryUnit::Sentence) {
            out.insert(out.end(), tokens.begin(), tokens.end());
        } else {
            out.insert(out.end(), tokens.begin() + static_cast<std::ptrdiff_t>(a.segment->start),
                       tokens.begin() + static_cast<std::ptrdiff_t>(a.segment->end) + 1);
        }
    }
    return out;
}

std::vector<SummaryRecord> build_oracle(const std::vector<Document>& docs,
                                        const std::vector<SentenceAnnotation>& annotations, SummaryUnit unit) {
    auto grouped = group_complete(docs, annotations);
    std::vector<SummaryRecord> out;
    out.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i)
        out.push_back({docs[i].doc_id, materialize(docs[i], grouped[i], unit), unit});
    return out;
}

std::vector<SummaryRecord> assemble_predictions(const std::vector<SentenceAnnotation>& predictions,
                                                const std::vector<Document>& docs, SummaryUnit unit) {
    std::unordered_map<std::string, std::size_t> slot;
    for (std::size_t i = 0; i < docs.size(); ++i) slot.emplace(docs[i].doc_id, i);
    std::vector<std::vector<SentenceAnnotation>> grouped(docs.size());
    for (const auto& p : predictions) {
        auto it = slot.find(p.doc_id);
        if (it == slot.end()) throw Error("prediction refers to unknown document '" + p.doc_id + "'");
        validate_annotation(p, docs[it->second]);
        grouped[it->second].push_back(p);
    }
    std::vector<SummaryRecord> out;
    out.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        auto& g = grouped[i];
        std::stable_sort(g.begin(), g.end(),
                         [](const auto& a, const auto& b) { return a.sentence_index < b.sentence_index; });
        for (std::size_t k = 1; k < g.size(); ++k)
            if (g[k].sentence_index == g[k - 1].sentence_index)
                throw Error("duplicate prediction for '" + docs[i].doc_id + "' sentence " +
                            std::to_string(g[k].sentence_index));
        out.push_back({docs[i].doc_id, materialize(docs[i], g, unit), unit});
    }
    return out;
}

std::size_t count_abstract_sentences(const TokenList& abstract_tokens) {
    std::size_t count = 0;
    bool open = false;
    for (const auto& t : abstract_tokens) {
        if (t == "." || t == "!" || t == "?") {
            ++count;
            open = false;
        } else {
            open = true;
        }
    }
    return count + (open ? 1 : 0);
}

DocumentStats document_stats(const Document& doc, std::span<const SentenceAnnotation> annotations) {
    DocumentStats s;
    s.doc_id = doc.doc_id;
    s.sentences = doc.sentences.size();
    s.abstract_tokens = doc.abstract_tokens.size();
    s.abstract_sentences = count_abstract_sentences(doc.abstract_tokens);
    for (const auto& a : annotations) {
        if (!a.segment) continue;
        validate_annotation(a, doc);
        ++s.positive_sentences;
        s.gold_tokens += a.segment->length();
        s.compression_sum += static_cast<double>(a.segment->length()) /
                             static_cast<double>(doc.sentences[a.sentence_index].size());
    }
    return s;
}

CorpusStats aggregate(std::vector<DocumentStats> per_document) {
    if (per_document.empty()) throw Error("corpus statistics need at least one document");
    CorpusStats c;
    c.documents = per_document.size();
    double gold_tokens = 0.0, abstract_sents = 0.0, abstract_tokens = 0.0, compression = 0.0;
    for (const auto& d : per_document) {
        c.total_sentences += d.sentences;
        c.positive_sentences += d.positive_sentences;
        gold_tokens += static_cast<double>(d.gold_tokens);
        compression += d.compression_sum;
        abstract_sents += static_cast<double>(d.abstract_sentences);
        abstract_tokens += static_cast<double>(d.abstract_tokens);
    }
    const double docs = static_cast<double>(c.documents);
    c.pos_sentence_rate =
        c.total_sentences ? static_cast<double>(c.positive_sentences) / static_cast<double>(c.total_sentences) : 0.0;
    c.mean_gold_sents_per_doc = static_cast<double>(c.positive_sentences) / docs;
    c.mean_gold_tokens_per_doc = gold_tokens / docs;
    c.compression_rate = c.positive_sentences ? compression / static_cast<double>(c.positive_sentences) : 0.0;
    c.mean_abstract_sents_per_doc = abstract_sents / docs;
    c.mean_abstract_tokens_per_doc = abstract_tokens / docs;
    c.per_document = std::move(per_document);
    return c;
}

CorpusStats corpus_stats(const std::vector<Document>& docs, const std::vector<SentenceAnnotation>& annotations) {
    if (docs.empty()) throw Error("corpus statistics need at least one document");
    auto grouped = group_complete(docs, annotations);
    std::vector<DocumentStats> rows;
    rows.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) rows.push_back(document_stats(docs[i], grouped[i]));
    return aggregate(std::move(rows));
}

double compression_ratio(const std::vector<SentenceAnnotation>& annotations, const std::vector<Document>& docs) {
    std::unordered_map<std::string, const Document*> by_id;
    for (const auto& d : docs) by_id.emplace(d.doc_id, &d);
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& a : annotations) {
        auto it = by_id.find(a.doc_id);
        if (it == by_id.end()) throw Error("annotation refers to unknown document '" + a.doc_id + "'");
        if (!a.segment) continue;
        validate_annotation(a, *it->second);
        sum += static_cast<double>(a.segment->length()) /
               static_cast<double>(it->second->sentences[a.sentence_index].size());
        ++n;
    }
    return n ? sum / static_cast<double>(n) : 0.0;
}

double abstract_coverage(const Document& doc, std::span<const std::size_t> token_alignment,
                         std::span<const SentenceAnnotation> annotations, SummaryUnit unit) {
    if (token_alignment.size() != doc.abstract_tokens.size())
        throw Error("coverage: " + std::to_string(token_alignment.size()) + " alignments for an abstract of " +
                    std::to_string(doc.abstract_tokens.size()) + " tokens");
    if (token_alignment.empty()) return 0.0;
    std::vector<const SentenceAnnotation*> by_sentence(doc.sentences.size(), nullptr);
    for (const auto& a : annotations) {
        validate_annotation(a, doc);
        by_sentence[a.sentence_index] = &a;
    }
    TokenIndex index(doc);
    std::size_t covered = 0;
    for (std::size_t flat : token_alignment) {
        TokenLocation loc = index.locate(flat);
        const SentenceAnnotation* a = by_sentence[loc.sentence_index];
        if (!a || !a->segment) continue;
        if (unit == SummaryUnit::Sentence ||
            (loc.local_index >= a->segment->start && loc.local_index <= a->segment->end))
            ++covered;
    }
    return static_cast<double>(covered) / static_cast<double>(token_alignment.size());
}

MacroRouge evaluate(const std::vector<SummaryRecord>& summaries, const std::vector<SummaryRecord>& references,
                    std::span<const RougeMetric> metrics) {
    std::unordered_map<std::string, const SummaryRecord*> refs;
    for (const auto& r : references)
        if (!refs.emplace(r.doc_id, &r).second) throw Error("duplicate reference for '" + r.doc_id + "'");
    std::set<std::string> seen;
    for (const auto& s : summaries) {
        if (!refs.contains(s.doc_id)) throw Error("summary for '" + s.doc_id + "' has no reference");
        if (!seen.insert(s.doc_id).second) throw Error("duplicate summary for '" + s.doc_id + "'");
    }
    if (seen.size() != refs.size()) {
        for (const auto& r : references)
            if (!seen.contains(r.doc_id)) throw Error("reference for '" + r.doc_id + "' has no summary");
    }
    if (summaries.empty()) throw Error("evaluate: no documents");

    MacroRouge out;
    const double n = static_cast<double>(summaries.size());
    for (RougeMetric m : metrics) {
        RougeScore acc{};
        for (const auto& s : summaries) {
            RougeScore r = rouge(m, s.tokens, refs.at(s.doc_id)->tokens);
            acc.precision += r.precision;
            acc.recall += r.recall;
            acc.f1 += r.f1;
        }
        out[m] = {acc.precision / n, acc.recall / n, acc.f1 / n};
    }
    return out;
}

std::vector<RougeMetric> parse_metric_list(const std::string& csv) {
    std::vector<RougeMetric> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) {
            RougeMetric m = parse_rouge_metric(item);
            if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
        }
    if (out.empty()) throw Error("no ROUGE metrics requested");
    return out;
}

std::vector<SummaryRecord> read_summaries(std::istream& in, const std::string& source) {
    std::vector<SummaryRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            json j = json::parse(line);
            if (!j.is_object() || !j.contains("doc_id") || !j.contains("tokens"))
                throw Error("record needs 'doc_id' and 'tokens'");
            if (!j["doc_id"].is_string()) throw Error("field 'doc_id' must be a string");
            out.push_back({j["doc_id"].get<std::string>(), j["tokens"].get<TokenList>(), SummaryUnit::Sentence});
        } catch (const json::exception& e) {
            throw ParseError(source, lineno, std::string("malformed summary: ") + e.what());
        } catch (const Error& e) {
            throw ParseError(source, lineno, e.what());
        }
    }
    return out;
}

std::vector<SummaryRecord> load_summaries(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open summary file " + path.string());
    return read_summaries(in, path.string());
}

void write_summaries(std::ostream& out, const std::vector<SummaryRecord>& records) {
    for (const auto& r : records) out << ordered_json{{"doc_id", r.doc_id}, {"tokens", r.tokens}}.dump() << '\n';
}

void save_summaries(const std::filesystem::path& path, const std::vector<SummaryRecord>& records) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write summary file " + path.string());
    write_summaries(out, records);
}

}  // namespace highlight
