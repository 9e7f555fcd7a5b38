#include "highlight/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include <json.hpp>

#include "highlight/error.hpp"

namespace highlight {

using nlohmann::json;
using nlohmann::ordered_json;

std::size_t Document::token_count() const noexcept {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.size();
    return n;
}

void validate(const Document& doc) {
    if (doc.doc_id.empty()) throw Error("document has an empty doc_id");
    if (doc.sentences.empty()) throw Error("document '" + doc.doc_id + "' has no sentences");
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
        const Sentence& sent = doc.sentences[s];
        if (sent.position != s)
            throw Error("document '" + doc.doc_id + "': sentence " + std::to_string(s) +
                        " carries position " + std::to_string(sent.position));
        if (sent.tokens.empty())
            throw Error("document '" + doc.doc_id + "': sentence " + std::to_string(s) + " is empty");
        for (const auto& tok : sent.tokens)
            if (tok.empty())
                throw Error("document '" + doc.doc_id + "': sentence " + std::to_string(s) +
                            " contains an empty token");
    }
    for (const auto& tok : doc.abstract_tokens)
        if (tok.empty()) throw Error("document '" + doc.doc_id + "': abstract contains an empty token");
}

Document make_document(std::string doc_id, std::vector<TokenList> sentences, TokenList abstract_tokens) {
    Document doc;
    doc.doc_id = std::move(doc_id);
    doc.sentences.reserve(sentences.size());
    for (std::size_t s = 0; s < sentences.size(); ++s)
        doc.sentences.push_back(Sentence{std::move(sentences[s]), s});
    doc.abstract_tokens = std::move(abstract_tokens);
    validate(doc);
    return doc;
}

std::vector<TokenLocation> flatten(const Document& doc) {
    std::vector<TokenLocation> out;
    out.reserve(doc.token_count());
    std::size_t flat = 0;
    for (std::size_t s = 0; s < doc.sentences.size(); ++s)
        for (std::size_t i = 0; i < doc.sentences[s].size(); ++i)
            out.push_back({flat++, s, i});
    return out;
}

TokenIndex::TokenIndex(const Document& doc) {
    offsets_.reserve(doc.sentences.size() + 1);
    offsets_.push_back(0);
    for (const auto& s : doc.sentences) offsets_.push_back(offsets_.back() + s.size());
}

std::size_t TokenIndex::sentence_length(std::size_t sentence) const {
    if (sentence >= sentence_count())
        throw Error("sentence index " + std::to_string(sentence) + " out of range");
    return offsets_[sentence + 1] - offsets_[sentence];
}

TokenLocation TokenIndex::locate(std::size_t flat_index) const {
    if (flat_index >= size())
        throw Error("flat token index " + std::to_string(flat_index) + " out of range [0, " +
                    std::to_string(size()) + ")");
    // First offset strictly greater than flat_index marks the following sentence.
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), flat_index);
    std::size_t sentence = static_cast<std::size_t>(it - offsets_.begin()) - 1;
    return {flat_index, sentence, flat_index - offsets_[sentence]};
}

std::size_t TokenIndex::flat_index(std::size_t sentence, std::size_t local) const {
    if (local >= sentence_length(sentence))
        throw Error("local index " + std::to_string(local) + " out of range for sentence " +
                    std::to_string(sentence));
    return offsets_[sentence] + local;
}

TokenList flat_tokens(const Document& doc) {
    TokenList out;
    out.reserve(doc.token_count());
    for (const auto& s : doc.sentences) out.insert(out.end(), s.tokens.begin(), s.tokens.end());
    return out;
}

namespace {

TokenList token_array(const json& j, const char* field) {
    if (!j.is_array()) throw Error(std::string("field '") + field + "' must be an array of strings");
    TokenList out;
    out.reserve(j.size());
    for (const auto& t : j) {
        if (!t.is_string()) throw Error(std::string("field '") + field + "' must contain only strings");
        out.push_back(t.get<std::string>());
    }
    return out;
}

Document parse_document(const std::string& line) {
    json j = json::parse(line);  // throws json::parse_error
    if (!j.is_object()) throw Error("record is not a JSON object");
    for (const char* field : {"doc_id", "sentences", "abstract"})
        if (!j.contains(field)) throw Error(std::string("missing field '") + field + "'");
    if (!j["doc_id"].is_string()) throw Error("field 'doc_id' must be a string");
    const json& sents = j["sentences"];
    if (!sents.is_array()) throw Error("field 'sentences' must be an array");
    std::vector<TokenList> sentences;
    sentences.reserve(sents.size());
    for (const auto& s : sents) sentences.push_back(token_array(s, "sentences"));
    return make_document(j["doc_id"].get<std::string>(), std::move(sentences),
                         token_array(j["abstract"], "abstract"));
}

}  // namespace

std::vector<Document> read_corpus(std::istream& in, const std::string& source) {
    std::vector<Document> docs;
    std::unordered_map<std::string, std::size_t> seen;  // doc_id -> line
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Document doc;
        try {
            doc = parse_document(line);
        } catch (const json::exception& e) {
            throw ParseError(source, lineno, std::string("malformed JSON: ") + e.what());
        } catch (const Error& e) {
            throw ParseError(source, lineno, e.what());
        }
        auto [it, inserted] = seen.emplace(doc.doc_id, lineno);
        if (!inserted)
            throw ParseError(source, lineno,
                             "duplicate doc_id '" + doc.doc_id + "' (first seen on line " +
                                 std::to_string(it->second) + ")");
        docs.push_back(std::move(doc));
    }
    return docs;
}

std::vector<Document> load_corpus(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open corpus file " + path.string());
    return read_corpus(in, path.string());
}

void write_corpus(std::ostream& out, const std::vector<Document>& docs) {
    for (const auto& doc : docs) {
        ordered_json sents = ordered_json::array();
        for (const auto& s : doc.sentences) sents.push_back(s.tokens);
        ordered_json j = {{"doc_id", doc.doc_id}, {"sentences", std::move(sents)}, {"abstract", doc.abstract_tokens}};
        out << j.dump() << '\n';
    }
}

void save_corpus(const std::filesystem::path& path, const std::vector<Document>& docs) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write corpus file " + path.string());
    write_corpus(out, docs);
}

}  // namespace highlight
