#include "matheval/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

namespace matheval::corpus {

namespace {

bool ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::size_t count_tokens(std::string_view s) {
    std::size_t n = 0;
    bool in_tok = false;
    for (char c : s) {
        if (ws(c)) {
            in_tok = false;
        } else if (!in_tok) {
            in_tok = true;
            ++n;
        }
    }
    return n;
}

// Removes unescaped-%-to-end-of-line comments; '%' counts as escaped when
// preceded by an odd number of backslashes. Newlines are kept.
std::string strip_tex_comments(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (c == '%') {
            std::size_t bs = 0;
            while (bs < i && s[i - 1 - bs] == '\\') ++bs;
            if (bs % 2 == 0) {
                while (i < s.size() && s[i] != '\n') ++i;
                continue;
            }
        }
        out.push_back(c);
        ++i;
    }
    return out;
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && ws(s[b])) ++b;
    while (e > b && ws(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

}  // namespace

bool density_exceeds(std::size_t tokens, std::size_t chars, unsigned num, unsigned den) {
    return tokens * den > chars * num;
}

CorpusDocument clean_arxiv(std::string id, std::string_view raw, std::string_view title,
                           std::string_view abstract_text, const CleanConfig& cfg) {
    CorpusDocument doc;
    doc.id = std::move(id);
    doc.kind = SourceKind::Arxiv;

    std::string body = strip_tex_comments(raw);
    std::size_t section = body.find("\\section");
    if (section == std::string::npos) {
        doc.rejection = "no-sections";
        return doc;
    }
    body = body.substr(section);
    std::size_t cut = std::string::npos;
    for (const std::string& header : cfg.cut_headers) {
        std::size_t at = body.find(header);
        if (at != std::string::npos && at < cut) cut = at;
    }
    if (cut != std::string::npos) body = body.substr(0, cut);

    std::string text;
    std::string t = trim(title), a = trim(abstract_text);
    if (!t.empty()) text += t + "\n\n";
    if (!a.empty()) text += a + "\n\n";
    text += trim(body);

    if (trim(text).empty()) {
        doc.rejection = "empty";
        return doc;
    }
    std::size_t tokens = count_tokens(text);
    std::size_t chars = text.size();
    if (tokens > cfg.max_tokens) {
        doc.token_count = tokens;
        doc.char_count = chars;
        doc.rejection = "over-length";
        return doc;
    }
    if (density_exceeds(tokens, chars, cfg.density_num, cfg.density_den)) {
        doc.token_count = tokens;
        doc.char_count = chars;
        doc.rejection = "density";
        return doc;
    }
    doc.extracted = std::move(text);
    doc.token_count = tokens;
    doc.char_count = chars;
    return doc;
}

bool page_has_math(std::string_view html) {
    return html.find("<math") != std::string_view::npos ||
           html.find("MathJax-Element-") != std::string_view::npos;
}

namespace {

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

bool iequal(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (lower(a[i]) != lower(b[i])) return false;
    return true;
}

std::size_t ifind(std::string_view hay, std::string_view needle, std::size_t from = 0) {
    if (needle.empty() || hay.size() < needle.size()) return std::string_view::npos;
    for (std::size_t i = from; i + needle.size() <= hay.size(); ++i) {
        if (iequal(hay.substr(i, needle.size()), needle)) return i;
    }
    return std::string_view::npos;
}

bool icontains(std::string_view hay, std::string_view needle) {
    return ifind(hay, needle) != std::string_view::npos;
}

struct Tag {
    std::string name;      // lowercased
    std::string attrs;     // raw attribute text
    bool closing = false;
    std::size_t end = 0;   // index just past '>'
};

// tolerant tag scan; returns false if there is no '>' ahead
bool read_tag(std::string_view html, std::size_t lt, Tag& tag) {
    std::size_t gt = html.find('>', lt);
    if (gt == std::string_view::npos) return false;
    std::size_t i = lt + 1;
    tag.closing = i < gt && html[i] == '/';
    if (tag.closing) ++i;
    std::size_t name_start = i;
    while (i < gt && (std::isalnum(static_cast<unsigned char>(html[i])) || html[i] == '-')) ++i;
    tag.name.assign(html.substr(name_start, i - name_start));
    for (char& c : tag.name) c = lower(c);
    tag.attrs.assign(html.substr(i, gt - i));
    tag.end = gt + 1;
    return true;
}

// content between the current position and the matching close tag of `name`
// (first occurrence, tolerant); returns npos-pair when unterminated
std::pair<std::size_t, std::size_t> element_content(std::string_view html, std::size_t from,
                                                    std::string_view name) {
    std::string close = "</" + std::string(name);
    std::size_t at = ifind(html, close, from);
    if (at == std::string_view::npos) return {std::string_view::npos, std::string_view::npos};
    std::size_t after = html.find('>', at);
    after = after == std::string_view::npos ? html.size() : after + 1;
    return {at, after};
}

bool is_block_tag(const std::string& name) {
    static const char* kBlocks[] = {"p",  "div", "br",    "li",    "ul",    "ol",    "tr",
                                    "td", "th",  "table", "h1",    "h2",    "h3",    "h4",
                                    "h5", "h6",  "section", "article", "blockquote", "pre"};
    for (const char* b : kBlocks)
        if (name == b) return true;
    return false;
}

void decode_entity(std::string_view html, std::size_t& i, std::string& out) {
    std::size_t semi = html.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
        out.push_back('&');
        ++i;
        return;
    }
    std::string_view ent = html.substr(i + 1, semi - i - 1);
    if (ent == "amp") out.push_back('&');
    else if (ent == "lt") out.push_back('<');
    else if (ent == "gt") out.push_back('>');
    else if (ent == "quot") out.push_back('"');
    else if (ent == "apos") out.push_back('\'');
    else if (ent == "nbsp") out.push_back(' ');
    else if (!ent.empty() && ent[0] == '#') {
        long code = 0;
        if (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X'))
            code = std::strtol(std::string(ent.substr(2)).c_str(), nullptr, 16);
        else
            code = std::strtol(std::string(ent.substr(1)).c_str(), nullptr, 10);
        if (code > 0 && code < 128) out.push_back(static_cast<char>(code));
        else out.push_back(' ');
    } else {
        out.push_back('&');
        ++i;
        return;
    }
    i = semi + 1;
}

// extracts x-tex annotation payloads inside one <math> block
void harvest_annotations(std::string_view block, std::string& out, bool& kept_any) {
    std::size_t pos = 0;
    while (true) {
        std::size_t at = ifind(block, "<annotation", pos);
        if (at == std::string_view::npos) return;
        std::size_t gt = block.find('>', at);
        if (gt == std::string_view::npos) return;
        std::string_view attrs = block.substr(at, gt - at);
        std::size_t close = ifind(block, "</annotation", gt);
        if (close == std::string_view::npos) return;
        if (icontains(attrs, "application/x-tex")) {
            out.append(block.substr(gt + 1, close - gt - 1));
            kept_any = true;
        }
        pos = block.find('>', close);
        if (pos == std::string_view::npos) return;
        ++pos;
    }
}

// drops a possibly nested <span>...</span> block; returns index past the close
std::size_t skip_span_block(std::string_view html, std::size_t open_end) {
    int depth = 1;
    std::size_t i = open_end;
    while (depth > 0) {
        std::size_t next_open = ifind(html, "<span", i);
        std::size_t next_close = ifind(html, "</span", i);
        if (next_close == std::string_view::npos) return html.size();
        if (next_open != std::string_view::npos && next_open < next_close) {
            ++depth;
            i = next_open + 5;
        } else {
            --depth;
            std::size_t gt = html.find('>', next_close);
            i = gt == std::string_view::npos ? html.size() : gt + 1;
        }
    }
    return i;
}

std::string collapse_blank_lines(std::string_view s) {
    std::string out;
    std::string line;
    bool wrote = false;
    auto flush = [&]() {
        std::size_t b = 0, e = line.size();
        while (b < e && ws(line[b])) ++b;
        while (e > b && ws(line[e - 1])) --e;
        if (e > b) {
            if (wrote) out.push_back('\n');
            out.append(line, b, e - b);
            wrote = true;
        }
        line.clear();
    };
    for (char c : s) {
        if (c == '\n') flush();
        else line.push_back(c);
    }
    flush();
    return out;
}

}  // namespace

std::optional<std::string> extract_math_html(std::string_view html) {
    std::string out;
    bool kept_any_math = false;
    std::size_t i = 0;
    while (i < html.size()) {
        char c = html[i];
        if (c == '<') {
            Tag tag;
            if (!read_tag(html, i, tag)) {
                out.append(html.substr(i));
                break;
            }
            if (!tag.closing && tag.name == "script") {
                auto [close, after] = element_content(html, tag.end, "script");
                if (close == std::string_view::npos) break;
                if (icontains(tag.attrs, "math/latex") || icontains(tag.attrs, "math/asciimath")) {
                    out.append(html.substr(tag.end, close - tag.end));
                    kept_any_math = true;
                }
                i = after;
            } else if (!tag.closing && tag.name == "style") {
                auto [close, after] = element_content(html, tag.end, "style");
                i = close == std::string_view::npos ? html.size() : after;
            } else if (!tag.closing && tag.name == "math") {
                auto [close, after] = element_content(html, tag.end, "math");
                if (close == std::string_view::npos) {
                    i = html.size();
                } else {
                    harvest_annotations(html.substr(tag.end, close - tag.end), out, kept_any_math);
                    i = after;
                }
            } else if (!tag.closing && tag.name == "span" &&
                       icontains(tag.attrs, "MathJax-Element-")) {
                i = skip_span_block(html, tag.end);
            } else {
                if (is_block_tag(tag.name)) out.push_back('\n');
                i = tag.end;
            }
        } else if (c == '&') {
            decode_entity(html, i, out);
        } else {
            out.push_back(c);
            ++i;
        }
    }
    if (!kept_any_math) return std::nullopt;  // MathML-only (or math-free) page
    return collapse_blank_lines(out);
}

std::vector<std::string> chunk_text(std::string_view text, const OverlapConfig& cfg) {
    std::vector<std::string> chunks;
    if (text.empty() || cfg.chunk_size == 0) return chunks;
    if (cfg.unit == ChunkUnit::Characters) {
        for (std::size_t i = 0; i < text.size(); i += cfg.chunk_size)
            chunks.emplace_back(text.substr(i, cfg.chunk_size));
        return chunks;
    }
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && ws(text[i])) ++i;
        std::size_t start = i;
        while (i < text.size() && !ws(text[i])) ++i;
        if (i > start) words.push_back(text.substr(start, i - start));
    }
    for (std::size_t w = 0; w < words.size(); w += cfg.chunk_size) {
        std::string chunk;
        std::size_t hi = std::min(w + cfg.chunk_size, words.size());
        for (std::size_t j = w; j < hi; ++j) {
            if (j > w) chunk.push_back(' ');
            chunk.append(words[j]);
        }
        chunks.push_back(std::move(chunk));
    }
    return chunks;
}

namespace {

std::vector<std::string> lc_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && ws(text[i])) ++i;
        std::size_t start = i;
        while (i < text.size() && !ws(text[i])) ++i;
        if (i > start) {
            std::string t(text.substr(start, i - start));
            for (char& ch : t) ch = lower(ch);
            out.push_back(std::move(t));
        }
    }
    return out;
}

using Ngram = std::vector<std::string>;

std::map<Ngram, int> ngram_counts(const std::vector<std::string>& toks, int n) {
    std::map<Ngram, int> counts;
    if (static_cast<int>(toks.size()) < n) return counts;
    for (std::size_t i = 0; i + n <= toks.size(); ++i) {
        Ngram g(toks.begin() + i, toks.begin() + i + n);
        ++counts[g];
    }
    return counts;
}

}  // namespace

double bleu(std::string_view candidate, std::string_view reference, int max_n) {
    std::vector<std::string> cand = lc_tokens(candidate);
    std::vector<std::string> ref = lc_tokens(reference);
    if (cand.empty() || ref.empty() || max_n < 1) return 0.0;
    int eff = std::min<std::size_t>(max_n, cand.size());
    double log_sum = 0.0;
    for (int n = 1; n <= eff; ++n) {
        std::map<Ngram, int> cn = ngram_counts(cand, n);
        std::map<Ngram, int> rn = ngram_counts(ref, n);
        long long total = 0, match = 0;
        for (const auto& [g, count] : cn) {
            total += count;
            auto it = rn.find(g);
            if (it != rn.end()) match += std::min(count, it->second);
        }
        if (match == 0) return 0.0;  // no smoothing
        log_sum += std::log(static_cast<double>(match) / static_cast<double>(total));
    }
    double bp = 1.0;
    if (cand.size() < ref.size())
        bp = std::exp(1.0 - static_cast<double>(ref.size()) / static_cast<double>(cand.size()));
    return 100.0 * bp * std::exp(log_sum / eff);
}

std::vector<OverlapHit> scan_document(const std::vector<Query>& queries, const std::string& doc_id,
                                      std::string_view text, const OverlapConfig& cfg) {
    std::vector<OverlapHit> hits;
    std::vector<std::string> chunks = chunk_text(text, cfg);
    for (std::size_t c = 0; c < chunks.size(); ++c) {
        for (const Query& q : queries) {
            double score = bleu(chunks[c], q.text, cfg.max_n);
            if (score >= cfg.report_floor) {
                OverlapHit hit;
                hit.query_id = q.id;
                hit.doc_id = doc_id;
                hit.chunk_index = c;
                hit.score = score;
                hit.excerpt = chunks[c].substr(0, 160);
                hits.push_back(std::move(hit));
            }
        }
    }
    return hits;
}

void sort_hits(std::vector<OverlapHit>& hits) {
    std::sort(hits.begin(), hits.end(), [](const OverlapHit& a, const OverlapHit& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.doc_id != b.doc_id) return a.doc_id < b.doc_id;
        if (a.chunk_index != b.chunk_index) return a.chunk_index < b.chunk_index;
        return a.query_id < b.query_id;
    });
}

std::vector<OverlapHit> overlap_scan(const std::vector<Query>& queries,
                                     const std::vector<std::pair<std::string, std::string>>& docs,
                                     const OverlapConfig& cfg) {
    std::vector<OverlapHit> hits;
    for (const auto& [id, text] : docs) {
        std::vector<OverlapHit> part = scan_document(queries, id, text, cfg);
        hits.insert(hits.end(), part.begin(), part.end());
    }
    sort_hits(hits);
    return hits;
}

std::vector<HistogramBin> score_histogram(const std::vector<OverlapHit>& hits, double bin_width) {
    std::vector<HistogramBin> bins;
    if (bin_width <= 0) return bins;
    std::size_t n = static_cast<std::size_t>(std::ceil(100.0 / bin_width));
    bins.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        bins[i].lo = static_cast<double>(i) * bin_width;
        bins[i].hi = std::min(100.0, bins[i].lo + bin_width);
    }
    bins[n].lo = 100.0;
    bins[n].hi = 100.0;  // exact-100 bucket
    for (const OverlapHit& h : hits) {
        std::size_t idx = h.score >= 100.0 ? n
                                           : static_cast<std::size_t>(h.score / bin_width);
        if (idx > n) idx = n;
        ++bins[idx].count;
    }
    return bins;
}

}  // namespace matheval::corpus
