#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "highlight/corpus.hpp"
#include "highlight/smoothing.hpp"

namespace highlight::testkit {

// A 36-token news sentence with a hand-checked alignment, the worked smoothing example.
TokenList crash_sentence();

// Local indices of the words aligned to the abstract in that sentence:
// marseille, france, the, french, crash, germanwings, 9525, insisted, he, of,
// video, footage, on.
std::set<std::size_t> crash_aligned_words();

// A one-sentence document wrapping crash_sentence().
Document crash_document();

// Three hand-built documents with known annotations:
//   a: 3 sentences (8, 4, 8 tokens), segments (1,5) and (0,7) in sentences 0 and 2
//   b: 2 sentences, no positives
//   c: 1 sentence "a b c d e f", segment (2,4)
std::vector<Document> micro_corpus();
std::vector<SentenceAnnotation> micro_annotations();

// Abstract-token alignment for document a of the micro corpus; see
// abstract_coverage tests for the expected fractions.
std::vector<std::size_t> micro_alignment_a();

}  // namespace highlight::testkit
