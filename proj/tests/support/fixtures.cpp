#include "support/fixtures.hpp"

namespace highlight::testkit {

TokenList crash_sentence() {
    return {"marseille", ",",       "france", "-lrb-",    "cnn",     "-rrb-",  "the",     "french",
            "prosecutor", "leading", "an",     "investigation", "into", "the",   "crash",   "of",
            "germanwings", "flight", "9525",   "insisted", "wednesday", "that", "he",      "was",
            "not",        "aware",   "of",     "any",      "video",   "footage", "from",   "on",
            "board",      "the",     "plane",  "."};
}

std::set<std::size_t> crash_aligned_words() { return {0, 2, 6, 7, 14, 16, 18, 19, 22, 26, 28, 29, 31}; }

Document crash_document() {
    return make_document("germanwings", {crash_sentence()},
                         {"prosecutor", "not", "aware", "of", "video", "footage", "."});
}

std::vector<Document> micro_corpus() {
    return {
        make_document("a",
                      {{"the", "cat", "sat", "on", "the", "mat", "today", "."},
                       {"it", "was", "sunny", "."},
                       {"dogs", "barked", "loudly", "at", "the", "mailman", "all", "day"}},
                      {"cat", "sat", "on", "mat", ".", "dogs", "barked", "."}),
        make_document("b", {{"nothing", "happened", "here"}, {"really", "nothing", "at", "all"}},
                      {"nothing", "."}),
        make_document("c", {{"a", "b", "c", "d", "e", "f"}}, {"c", "d", "e"}),
    };
}

std::vector<SentenceAnnotation> micro_annotations() {
    return {
        {"a", 0, Run{1, 5}}, {"a", 1, std::nullopt}, {"a", 2, Run{0, 7}},
        {"b", 0, std::nullopt}, {"b", 1, std::nullopt},
        {"c", 0, Run{2, 4}},
    };
}

std::vector<std::size_t> micro_alignment_a() {
    // cat sat on mat . dogs barked .
    return {1, 2, 3, 5, 7, 12, 13, 11};
}

}  // namespace highlight::testkit
