#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace highlight {

using Token = std::string;
using TokenList = std::vector<Token>;

struct Sentence {
    TokenList tokens;
    std::size_t position = 0;  // rank within Document::sentences

    std::size_t size() const noexcept { return tokens.size(); }
    bool operator==(const Sentence&) const = default;
};

// A pre-tokenized, pre-split source document with its reference abstract.
// Construct through make_document() to get the invariants checked.
struct Document {
    std::string doc_id;
    std::vector<Sentence> sentences;
    TokenList abstract_tokens;

    // Flattened token count M.
    std::size_t token_count() const noexcept;
    bool operator==(const Document&) const = default;
};

struct TokenLocation {
    std::size_t flat_index = 0;
    std::size_t sentence_index = 0;
    std::size_t local_index = 0;

    bool operator==(const TokenLocation&) const = default;
};

// Builds and validates a document: at least one sentence, no empty sentence,
// no empty token. Throws highlight::Error on violation.
Document make_document(std::string doc_id,
                       std::vector<TokenList> sentences,
                       TokenList abstract_tokens);

void validate(const Document& doc);

// One location per document token, in reading order.
std::vector<TokenLocation> flatten(const Document& doc);

// Prefix sums over sentence lengths; offsets()[s] is the flat index of the
// first token of sentence s and offsets().back() == M.
class TokenIndex {
public:
    explicit TokenIndex(const Document& doc);

    std::size_t size() const noexcept { return offsets_.back(); }
    std::size_t sentence_count() const noexcept { return offsets_.size() - 1; }
    std::size_t sentence_length(std::size_t sentence) const;
    const std::vector<std::size_t>& offsets() const noexcept { return offsets_; }

    // Throws highlight::Error when out of range.
    TokenLocation locate(std::size_t flat_index) const;
    std::size_t flat_index(std::size_t sentence, std::size_t local) const;

private:
    std::vector<std::size_t> offsets_;
};

TokenList flat_tokens(const Document& doc);

std::vector<Document> read_corpus(std::istream& in, const std::string& source = "<stream>");
std::vector<Document> load_corpus(const std::filesystem::path& path);

void write_corpus(std::ostream& out, const std::vector<Document>& docs);
void save_corpus(const std::filesystem::path& path, const std::vector<Document>& docs);

}  // namespace highlight
