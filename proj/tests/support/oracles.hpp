#pragma once

// Reference implementations used only by tests. Each one takes a deliberately
// different route from the library code it checks.

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "highlight/corpus.hpp"
#include "highlight/smoothing.hpp"

namespace highlight::testkit {

// Linear scan keeping the first strict maximum.
std::size_t scan_argmax(const std::vector<double>& row);

// All maximal fully-selected intervals, by enumerating every [i, j].
std::vector<Run> enumerate_runs(const std::set<std::size_t>& selected, std::size_t sentence_len);

// Gap filling decided position by position from the nearest selected
// neighbours on each side.
std::set<std::size_t> neighbour_fill(const std::set<std::size_t>& selected, std::size_t sentence_len,
                                     const SmoothingConfig& cfg);

// neighbour_fill, then enumerate_runs, then longest/earliest with threshold.
std::optional<Run> brute_force_segment(const std::set<std::size_t>& selected, std::size_t sentence_len,
                                       const SmoothingConfig& cfg);

// Clipped n-gram overlap by counting occurrences in plain vectors.
struct Counts {
    std::size_t overlap = 0;
    std::size_t candidate = 0;
    std::size_t reference = 0;
};
Counts count_ngram_overlap(const TokenList& candidate, const TokenList& reference, std::size_t n);

// Longest common subsequence by enumerating every subsequence of the shorter
// input (exponential; keep inputs under ~16 tokens).
std::size_t brute_force_lcs(const TokenList& a, const TokenList& b);

}  // namespace highlight::testkit
