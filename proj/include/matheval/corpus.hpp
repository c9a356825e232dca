#ifndef MATHEVAL_CORPUS_HPP_
#define MATHEVAL_CORPUS_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace matheval::corpus {

enum class SourceKind { Arxiv, Webpage };

struct CorpusDocument {
    std::string id;
    SourceKind kind = SourceKind::Arxiv;
    std::string extracted;                 // empty iff rejected
    std::size_t token_count = 0;           // whitespace-token proxy
    std::size_t char_count = 0;
    std::optional<std::string> rejection;  // set iff extracted is absent
    bool accepted() const { return !rejection.has_value(); }
};

struct CleanConfig {
    std::size_t max_tokens = 75000;
    // density bound tokens/chars > num/den rejects; exact integer comparison
    unsigned density_num = 6;
    unsigned density_den = 10;
    std::vector<std::string> cut_headers{"\\appendix", "\\begin{thebibliography}",
                                         "\\bibliography"};
};

// The density rejection predicate: tokens/chars > num/den, decided in
// exact integer arithmetic (no floating point at the boundary).
bool density_exceeds(std::size_t tokens, std::size_t chars, unsigned num, unsigned den);

// LaTeX source cleaning: strips comments, drops everything before the first
// \section and after the first appendix/bibliography header, prepends
// title+abstract, then applies the length/density/structure filters.
// Rejections are data (reason recorded), never errors. Checks run in the
// order: no-sections, empty, over-length, density.
CorpusDocument clean_arxiv(std::string id, std::string_view raw, std::string_view title,
                           std::string_view abstract_text, const CleanConfig& cfg = {});

// inclusion filter for web pages
bool page_has_math(std::string_view html);

// Math-preserving HTML text extraction: keeps script math/latex and
// math/asciimath content inline, keeps x-tex annotation content from <math>
// blocks, drops the rest of <math> and MathJax-Element spans, strips tags.
// nullopt = discard verdict (the page's only math was MathML).
std::optional<std::string> extract_math_html(std::string_view html);

enum class ChunkUnit { Characters, Words };

struct OverlapConfig {
    std::size_t chunk_size = 500;
    ChunkUnit unit = ChunkUnit::Characters;
    int max_n = 4;
    double report_floor = 30.0;
    double high_threshold = 80.0;
};

// Non-overlapping consecutive chunks; a short final remainder is kept.
std::vector<std::string> chunk_text(std::string_view text, const OverlapConfig& cfg);

// Single-pair BLEU on whitespace tokens after lowercasing: clipped n-gram
// precisions, geometric mean, brevity penalty, no smoothing; the order is
// clamped to the candidate length so identical texts always score 100.
double bleu(std::string_view candidate, std::string_view reference, int max_n = 4);

struct Query {
    std::string id;
    std::string text;
};

struct OverlapHit {
    std::string query_id;
    std::string doc_id;
    std::size_t chunk_index = 0;
    double score = 0;
    std::string excerpt;
};

// all hits >= report_floor for one document; pure function, parallel-safe
std::vector<OverlapHit> scan_document(const std::vector<Query>& queries,
                                      const std::string& doc_id, std::string_view text,
                                      const OverlapConfig& cfg);

// descending score; ties by (document id, chunk index, query id)
void sort_hits(std::vector<OverlapHit>& hits);

// in-memory convenience over scan_document + sort_hits
std::vector<OverlapHit> overlap_scan(const std::vector<Query>& queries,
                                     const std::vector<std::pair<std::string, std::string>>& docs,
                                     const OverlapConfig& cfg);

struct HistogramBin {
    double lo = 0, hi = 0;
    std::size_t count = 0;
};

// fixed-width score bins over [0, 100]; hits below the floor were never kept
std::vector<HistogramBin> score_histogram(const std::vector<OverlapHit>& hits,
                                          double bin_width = 5.0);

}  // namespace matheval::corpus

#endif  // MATHEVAL_CORPUS_HPP_
