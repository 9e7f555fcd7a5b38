#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "highlight/corpus.hpp"

namespace highlight::extractor {

using TokenId = std::size_t;

class Vocab {
public:
    static constexpr TokenId kCls = 0;
    static constexpr TokenId kUnk = 1;
    static constexpr const char* kClsToken = "[CLS]";
    static constexpr const char* kUnkToken = "[UNK]";

    Vocab();
    // tokens[0] and tokens[1] must be the reserved [CLS] and [UNK] entries.
    explicit Vocab(std::vector<std::string> tokens);

    // Every distinct token in first-seen order, dropping those seen fewer
    // than min_count times.
    static Vocab build(const std::vector<TokenList>& sentences, std::size_t min_count = 1);

    TokenId id(const std::string& token) const;
    const std::string& token(TokenId id) const { return tokens_.at(id); }
    bool contains(const std::string& token) const { return ids_.contains(token); }
    std::size_t size() const noexcept { return tokens_.size(); }
    const std::vector<std::string>& tokens() const noexcept { return tokens_; }

    bool operator==(const Vocab& other) const { return tokens_ == other.tokens_; }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, TokenId> ids_;
};

}  // namespace highlight::extractor
