#include "highlight/alignment.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include "highlight/error.hpp"

namespace highlight {

using nlohmann::json;
using nlohmann::ordered_json;

AttentionMatrix::AttentionMatrix(std::string doc_id, std::size_t rows, std::size_t cols,
                                 std::vector<double> weights)
    : doc_id_(std::move(doc_id)), rows_(rows), cols_(cols), weights_(std::move(weights)) {
    if (weights_.size() != rows_ * cols_)
        throw Error("attention matrix for '" + doc_id_ + "': expected " + std::to_string(rows_ * cols_) +
                    " weights, got " + std::to_string(weights_.size()));
}

AttentionMatrix::AttentionMatrix(std::string doc_id, const std::vector<std::vector<double>>& rows)
    : doc_id_(std::move(doc_id)), rows_(rows.size()), cols_(rows.empty() ? 0 : rows.front().size()) {
    weights_.reserve(rows_ * cols_);
    for (std::size_t t = 0; t < rows.size(); ++t) {
        if (rows[t].size() != cols_)
            throw Error("attention matrix for '" + doc_id_ + "': row " + std::to_string(t) + " has " +
                        std::to_string(rows[t].size()) + " columns, expected " + std::to_string(cols_));
        weights_.insert(weights_.end(), rows[t].begin(), rows[t].end());
    }
}

std::span<const double> AttentionMatrix::row(std::size_t t) const {
    if (t >= rows_) throw Error("attention row " + std::to_string(t) + " out of range");
    return {weights_.data() + t * cols_, cols_};
}

std::size_t row_argmax(std::span<const double> row) {
    if (row.empty()) throw Error("row_argmax: empty row");
    std::size_t best = 0;
    for (std::size_t i = 1; i < row.size(); ++i)
        if (row[i] > row[best]) best = i;
    return best;
}

void validate(const AttentionMatrix& attn, const AlignmentOptions& opts) {
    for (std::size_t t = 0; t < attn.rows(); ++t) {
        auto r = attn.row(t);
        double sum = 0.0;
        for (double w : r) {
            if (!(w >= 0.0) || !std::isfinite(w))
                throw Error("attention matrix for '" + attn.doc_id() + "': row " + std::to_string(t) +
                            " has a negative or non-finite weight");
            sum += w;
        }
        if (opts.check_normalization && std::abs(sum - 1.0) > opts.row_sum_tolerance)
            throw Error("attention matrix for '" + attn.doc_id() + "': row " + std::to_string(t) +
                        " sums to " + std::to_string(sum) + ", not 1");
    }
}

void validate_against(const AttentionMatrix& attn, const Document& doc) {
    if (attn.doc_id() != doc.doc_id)
        throw Error("attention doc_id '" + attn.doc_id() + "' does not match document '" + doc.doc_id + "'");
    if (attn.rows() != doc.abstract_tokens.size())
        throw Error("attention matrix for '" + doc.doc_id + "' has " + std::to_string(attn.rows()) +
                    " rows but the abstract has " + std::to_string(doc.abstract_tokens.size()) + " tokens");
    if (attn.rows() > 0 && attn.cols() != doc.token_count())
        throw Error("attention matrix for '" + doc.doc_id + "' has " + std::to_string(attn.cols()) +
                    " columns but the document has " + std::to_string(doc.token_count()) + " tokens");
}

std::vector<std::size_t> row_alignments(const AttentionMatrix& attn, const AlignmentOptions& opts) {
    validate(attn, opts);
    std::vector<std::size_t> out;
    out.reserve(attn.rows());
    for (std::size_t t = 0; t < attn.rows(); ++t) out.push_back(row_argmax(attn.row(t)));
    return out;
}

AlignedWordSet align_argmax(const AttentionMatrix& attn, const AlignmentOptions& opts) {
    auto per_row = row_alignments(attn, opts);
    return {attn.doc_id(), std::set<std::size_t>(per_row.begin(), per_row.end())};
}

std::vector<AttentionMatrix> read_attention(std::istream& in, const std::string& source) {
    std::vector<AttentionMatrix> out;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            json j = json::parse(line);
            if (!j.is_object() || !j.contains("doc_id") || !j.contains("weights"))
                throw Error("record needs 'doc_id' and 'weights'");
            if (!j["doc_id"].is_string()) throw Error("field 'doc_id' must be a string");
            auto rows = j["weights"].get<std::vector<std::vector<double>>>();
            AttentionMatrix m(j["doc_id"].get<std::string>(), rows);
            if (!seen.insert(m.doc_id()).second) throw Error("duplicate doc_id '" + m.doc_id() + "'");
            out.push_back(std::move(m));
        } catch (const json::exception& e) {
            throw ParseError(source, lineno, std::string("malformed attention record: ") + e.what());
        } catch (const Error& e) {
            throw ParseError(source, lineno, e.what());
        }
    }
    return out;
}

std::vector<AttentionMatrix> load_attention(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open attention file " + path.string());
    return read_attention(in, path.string());
}

void write_attention(std::ostream& out, const std::vector<AttentionMatrix>& mats) {
    for (const auto& m : mats) {
        ordered_json rows = ordered_json::array();
        for (std::size_t t = 0; t < m.rows(); ++t) {
            auto r = m.row(t);
            rows.push_back(std::vector<double>(r.begin(), r.end()));
        }
        out << ordered_json{{"doc_id", m.doc_id()}, {"weights", std::move(rows)}}.dump() << '\n';
    }
}

}  // namespace highlight
