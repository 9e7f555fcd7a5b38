#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "highlight/corpus.hpp"
#include "highlight/smoothing.hpp"

namespace highlight {

// Static HTML page for one document. Every sentence is a
// <p data-sentence="i">; positive sentences carry class="hl-sent" and their
// segment tokens are wrapped in a single <mark class="hl-segm">. Tokens are
// space-joined and HTML-escaped. Output depends only on the inputs.
std::string render_highlights(const Document& doc, std::span<const SentenceAnnotation> annotations);

std::string html_escape(const std::string& text);

// File-system-safe stem for a doc_id: [A-Za-z0-9._-] kept, anything else '_'.
std::string file_stem(const std::string& doc_id);

// Writes <dir>/<file_stem(doc_id)>.html per document (creating dir) and
// returns the written paths in document order. Colliding stems get a numeric
// suffix.
std::vector<std::filesystem::path> write_highlight_pages(const std::filesystem::path& dir,
                                                         const std::vector<Document>& docs,
                                                         const std::vector<SentenceAnnotation>& annotations);

}  // namespace highlight
