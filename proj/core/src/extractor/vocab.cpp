#include "highlight/extractor/vocab.hpp"

#include "highlight/error.hpp"

namespace highlight::extractor {

Vocab::Vocab() : Vocab(std::vector<std::string>{kClsToken, kUnkToken}) {}

Vocab::Vocab(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
    if (tokens_.size() < 2 || tokens_[kCls] != kClsToken || tokens_[kUnk] != kUnkToken)
        throw Error("vocabulary must start with the reserved [CLS] and [UNK] entries");
    for (TokenId i = 0; i < tokens_.size(); ++i)
        if (!ids_.emplace(tokens_[i], i).second) throw Error("duplicate vocabulary entry '" + tokens_[i] + "'");
}

Vocab Vocab::build(const std::vector<TokenList>& sentences, std::size_t min_count) {
    std::unordered_map<std::string, std::size_t> counts;
    std::vector<std::string> order;
    for (const auto& s : sentences)
        for (const auto& t : s)
            if (counts[t]++ == 0) order.push_back(t);
    std::vector<std::string> tokens{kClsToken, kUnkToken};
    for (auto& t : order)
        if (counts[t] >= min_count && t != kClsToken && t != kUnkToken) tokens.push_back(std::move(t));
    return Vocab(std::move(tokens));
}

TokenId Vocab::id(const std::string& token) const {
    auto it = ids_.find(token);
    return it == ids_.end() ? kUnk : it->second;
}

}  // namespace highlight::extractor
