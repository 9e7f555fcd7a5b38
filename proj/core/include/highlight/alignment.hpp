#pragma once

#include <cstddef>
#include <iosfwd>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "highlight/corpus.hpp"

namespace highlight {

// Abstract-by-document attention: rows() == abstract length N, cols() == flat
// document length M, stored row-major.
class AttentionMatrix {
public:
    AttentionMatrix() = default;
    AttentionMatrix(std::string doc_id, std::size_t rows, std::size_t cols, std::vector<double> weights);
    AttentionMatrix(std::string doc_id, const std::vector<std::vector<double>>& rows);

    const std::string& doc_id() const noexcept { return doc_id_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::span<const double> row(std::size_t t) const;
    double operator()(std::size_t t, std::size_t i) const { return weights_[t * cols_ + i]; }

private:
    std::string doc_id_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> weights_;
};

struct AlignedWordSet {
    std::string doc_id;
    std::set<std::size_t> indices;  // flat document-token indices
};

inline constexpr double kRowSumTolerance = 1e-4;

struct AlignmentOptions {
    // Disable to align unnormalized score matrices; non-negativity is still checked.
    bool check_normalization = true;
    double row_sum_tolerance = kRowSumTolerance;
};

// Smallest index attaining the row maximum. Throws on an empty row.
std::size_t row_argmax(std::span<const double> row);

// Checks non-negativity and (optionally) row sums; error names the 0-based row.
void validate(const AttentionMatrix& attn, const AlignmentOptions& opts = {});

// Checks N and M against the referenced document.
void validate_against(const AttentionMatrix& attn, const Document& doc);

// Per-abstract-token alignment: element t is the argmax document index of row t.
std::vector<std::size_t> row_alignments(const AttentionMatrix& attn, const AlignmentOptions& opts = {});

// Union of per-row argmaxes. Multi-word (threshold) alignment would slot in
// beside this function; it is deliberately not provided.
AlignedWordSet align_argmax(const AttentionMatrix& attn, const AlignmentOptions& opts = {});

std::vector<AttentionMatrix> read_attention(std::istream& in, const std::string& source = "<stream>");
std::vector<AttentionMatrix> load_attention(const std::filesystem::path& path);
void write_attention(std::ostream& out, const std::vector<AttentionMatrix>& mats);

}  // namespace highlight
