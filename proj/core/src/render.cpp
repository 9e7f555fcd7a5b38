#include "highlight/render.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "highlight/error.hpp"

namespace highlight {

std::string html_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&#39;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string render_highlights(const Document& doc, std::span<const SentenceAnnotation> annotations) {
    std::vector<const SentenceAnnotation*> by_sentence(doc.sentences.size(), nullptr);
    for (const auto& a : annotations) {
        validate_annotation(a, doc);
        by_sentence[a.sentence_index] = &a;
    }

    std::ostringstream html;
    const std::string id = html_escape(doc.doc_id);
    html << "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>" << id << "</title>\n"
         << "<style>p.hl-sent{background:#fff4c2}mark.hl-segm{background:#ffb347}</style>\n"
         << "</head>\n<body>\n<article data-doc-id=\"" << id << "\">\n";
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
        const auto& tokens = doc.sentences[s].tokens;
        const SentenceAnnotation* a = by_sentence[s];
        const bool positive = a && a->segment;
        html << "<p data-sentence=\"" << s << "\"" << (positive ? " class=\"hl-sent\"" : "") << ">";
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (i > 0) html << ' ';
            if (positive && i == a->segment->start) html << "<mark class=\"hl-segm\">";
            html << html_escape(tokens[i]);
            if (positive && i == a->segment->end) html << "</mark>";
        }
        html << "</p>\n";
    }
    html << "</article>\n</body>\n</html>\n";
    return html.str();
}

std::string file_stem(const std::string& doc_id) {
    std::string out;
    for (char c : doc_id) {
        bool safe = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                    c == '_' || c == '-';
        out += safe ? c : '_';
    }
    if (out.empty() || out == "." || out == "..") out = "_" + out;
    return out;
}

std::vector<std::filesystem::path> write_highlight_pages(const std::filesystem::path& dir,
                                                         const std::vector<Document>& docs,
                                                         const std::vector<SentenceAnnotation>& annotations) {
    std::unordered_map<std::string, std::vector<SentenceAnnotation>> grouped;
    for (const auto& a : annotations) grouped[a.doc_id].push_back(a);
    for (const auto& [id, _] : grouped) {
        bool known = false;
        for (const auto& d : docs) known = known || d.doc_id == id;
        if (!known) throw Error("annotation refers to unknown document '" + id + "'");
    }

    std::filesystem::create_directories(dir);
    std::set<std::string> used;
    std::vector<std::filesystem::path> written;
    for (const auto& doc : docs) {
        std::string stem = file_stem(doc.doc_id);
        std::string name = stem;
        for (int k = 1; !used.insert(name).second; ++k) name = stem + "-" + std::to_string(k);
        auto path = dir / (name + ".html");
        std::ofstream out(path);
        if (!out) throw Error("cannot write " + path.string());
        out << render_highlights(doc, grouped[doc.doc_id]);
        written.push_back(path);
    }
    return written;
}

}  // namespace highlight
