#include "matheval/normalize.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace matheval::answers {

namespace {

const std::string kWs = " \t\n\r\v\f";

std::string strip(std::string_view s) {
    std::size_t b = s.find_first_not_of(kWs);
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(kWs);
    return std::string(s.substr(b, e - b + 1));
}

std::string replace_all(std::string_view s, std::string_view from, std::string_view to) {
    std::string out;
    out.reserve(s.size());
    std::size_t pos = 0;
    while (true) {
        std::size_t hit = s.find(from, pos);
        if (hit == std::string_view::npos) {
            out.append(s.substr(pos));
            return out;
        }
        out.append(s.substr(pos, hit - pos));
        out.append(to);
        pos = hit + from.size();
    }
}

std::string unescape_entry(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && i + 1 < s.size()) {
            char c = s[++i];
            switch (c) {
                case '\\': out.push_back('\\'); break;
                case 't': out.push_back('\t'); break;
                case 'n': out.push_back('\n'); break;
                case 'r': out.push_back('\r'); break;
                default:
                    throw std::invalid_argument("tables: bad escape");
            }
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

std::size_t line_end(std::string_view s, std::size_t from) {
    std::size_t nl = s.find('\n', from);
    return nl == std::string_view::npos ? s.size() : nl;
}

// --- the scan-and-rewrite procedures behind the regex rule names ---
// Python re semantics are reproduced as explicit scans: '.' never crosses a
// newline, matches are non-overlapping left to right, and scanning resumes
// after each match in the source string.

// (.*?)(\$)(.*?)(\$)(.*) -> '$\3$' : per line, keep the first $-pair's
// content and drop the rest of the line.
std::string rw_extract_dollar(std::string_view s) {
    std::string out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t eol = line_end(s, pos);
        std::size_t d1 = s.find('$', pos);
        if (d1 == std::string_view::npos) break;
        if (d1 >= eol) {  // no '$' on this line segment; copy it and move on
            out.append(s.substr(pos, std::min(eol + 1, s.size()) - pos));
            pos = std::min(eol + 1, s.size());
            continue;
        }
        std::size_t d2 = s.find('$', d1 + 1);
        if (d2 == std::string_view::npos || d2 >= eol) {
            out.append(s.substr(pos, std::min(eol + 1, s.size()) - pos));
            pos = std::min(eol + 1, s.size());
            continue;
        }
        // match spans [pos, eol): group 3 is the pair's content
        out.push_back('$');
        out.append(s.substr(d1 + 1, d2 - d1 - 1));
        out.push_back('$');
        pos = eol;
    }
    out.append(s.substr(pos));
    return out;
}

// (\TAG{)(.*?)(}) -> '\2' : lazy content, no newline inside
std::string rw_unwrap_lazy(std::string_view s, std::string_view tag) {
    std::string out;
    std::size_t pos = 0, search = 0;
    while (true) {
        std::size_t t = s.find(tag, search);
        if (t == std::string_view::npos) break;
        std::size_t inner = t + tag.size();
        std::size_t close = s.find('}', inner);
        std::size_t eol = line_end(s, inner);
        if (close == std::string_view::npos || close >= eol) {
            search = t + 1;
            continue;
        }
        out.append(s.substr(pos, t - pos));
        out.append(s.substr(inner, close - inner));
        pos = close + 1;
        search = pos;
    }
    out.append(s.substr(pos));
    return out;
}

// (\boxed{)(.*)(}) -> '\2' : greedy content up to the last '}' on the line
std::string rw_unwrap_boxed(std::string_view s) {
    const std::string_view tag = "\\boxed{";
    std::string out;
    std::size_t pos = 0, search = 0;
    while (true) {
        std::size_t t = s.find(tag, search);
        if (t == std::string_view::npos) break;
        std::size_t inner = t + tag.size();
        std::size_t eol = line_end(s, inner);
        std::size_t close = s.rfind('}', eol == 0 ? 0 : eol - 1);
        if (close == std::string_view::npos || close < inner) {
            search = t + 1;
            continue;
        }
        out.append(s.substr(pos, t - pos));
        out.append(s.substr(inner, close - inner));
        pos = close + 1;
        search = pos;
    }
    out.append(s.substr(pos));
    return out;
}

// (frac)([^{])(.) -> frac{\2}{\3} : second char may be newline, third may not
std::string rw_expand_frac(std::string_view s) {
    std::string out;
    std::size_t pos = 0, search = 0;
    while (true) {
        std::size_t t = s.find("frac", search);
        if (t == std::string_view::npos) break;
        if (t + 6 > s.size()) {  // needs two more characters
            search = t + 1;
            continue;
        }
        char c1 = s[t + 4], c2 = s[t + 5];
        if (c1 == '{' || c2 == '\n') {
            search = t + 1;
            continue;
        }
        out.append(s.substr(pos, t - pos));
        out.append("frac{");
        out.push_back(c1);
        out.append("}{");
        out.push_back(c2);
        out.push_back('}');
        pos = t + 6;
        search = pos;
    }
    out.append(s.substr(pos));
    return out;
}

// (sqrt)([^{]) -> sqrt{\2}
std::string rw_expand_sqrt(std::string_view s) {
    std::string out;
    std::size_t pos = 0, search = 0;
    while (true) {
        std::size_t t = s.find("sqrt", search);
        if (t == std::string_view::npos) break;
        if (t + 5 > s.size()) {
            search = t + 1;
            continue;
        }
        char c1 = s[t + 4];
        if (c1 == '{') {
            search = t + 1;
            continue;
        }
        out.append(s.substr(pos, t - pos));
        out.append("sqrt{");
        out.push_back(c1);
        out.push_back('}');
        pos = t + 5;
        search = pos;
    }
    out.append(s.substr(pos));
    return out;
}

bool all_ascii_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

std::string rw_collapse_comma_digits(std::string_view s) {
    std::string no_comma = replace_all(s, ",", "");
    if (all_ascii_digits(no_comma)) return no_comma;
    return std::string(s);
}

}  // namespace

NormalizationTables NormalizationTables::parse(std::string_view text) {
    NormalizationTables t;
    std::string section;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = line_end(text, pos);
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (line.empty() && pos > text.size()) break;
        if (line.empty() || line[0] == '#') continue;
        if (line.substr(0, 8) == "version ") {
            t.version = std::atoi(std::string(line.substr(8)).c_str());
            continue;
        }
        if (line.front() == '[' && line.back() == ']') {
            section = std::string(line.substr(1, line.size() - 2));
            continue;
        }
        if (section == "substitutions") {
            std::size_t tab = line.find('\t');
            if (tab == std::string_view::npos)
                throw std::invalid_argument("tables: substitution without tab");
            t.substitutions.emplace_back(unescape_entry(line.substr(0, tab)),
                                         unescape_entry(line.substr(tab + 1)));
        } else if (section == "removals") {
            t.removals.push_back(unescape_entry(line));
        } else if (section == "rules") {
            t.rules.emplace_back(line);
        } else if (section == "units") {
            t.units.push_back(unescape_entry(line));
        } else if (section == "maybe-units") {
            t.maybe_units.push_back(unescape_entry(line));
        } else {
            throw std::invalid_argument("tables: entry outside a section");
        }
    }
    if (t.version == 0) throw std::invalid_argument("tables: missing version");
    return t;
}

const NormalizationTables& NormalizationTables::builtin() {
    static const NormalizationTables t = NormalizationTables::parse(builtin_tables_text());
    return t;
}

std::optional<std::string> extract_final_answer(std::string_view completion, AnswerStyle style) {
    if (style == AnswerStyle::MathStyle) {
        const std::string_view prefix = "The final answer is ";
        const std::string_view suffix = ". I hope it is correct";
        std::size_t pos = completion.rfind(prefix);
        while (pos != std::string_view::npos) {
            std::size_t after = pos + prefix.size();
            std::size_t sfx = completion.find(suffix, after);
            if (sfx != std::string_view::npos)
                return std::string(completion.substr(after, sfx - after));
            if (pos == 0) break;
            pos = completion.rfind(prefix, pos - 1);
        }
        return std::nullopt;
    }
    // OcwStyle mirrors the original Python grader: text before the first
    // end marker, the segment after the first start marker (up to the next
    // one), drop the replacement phrase, then scrub trailing periods.
    const std::string_view end_str = "I hope it is correct";
    const std::string_view start_str = "Final answer: ";
    const std::string_view replacement = "The final answer is ";
    std::size_t cut = completion.find(end_str);
    std::string_view head = cut == std::string_view::npos ? completion : completion.substr(0, cut);
    std::size_t p1 = head.find(start_str);
    if (p1 == std::string_view::npos) return std::nullopt;
    std::size_t seg_start = p1 + start_str.size();
    std::size_t p2 = head.find(start_str, seg_start);
    std::string_view seg = head.substr(seg_start, p2 == std::string_view::npos
                                                      ? std::string_view::npos
                                                      : p2 - seg_start);
    std::string t = strip(seg);
    t = replace_all(t, replacement, "");
    t = strip(t);
    std::size_t e = t.find_last_not_of('.');
    t = e == std::string::npos ? std::string() : t.substr(0, e + 1);
    return strip(t);
}

std::string normalize_final_answer(std::string_view raw) {
    return normalize_final_answer(raw, NormalizationTables::builtin());
}

std::string normalize_final_answer(std::string_view raw, const NormalizationTables& tables) {
    std::string s(raw);
    for (const std::string& rule : tables.rules) {
        if (rule == "split-equals-last") {
            std::size_t eq = s.rfind('=');
            if (eq != std::string::npos) s = s.substr(eq + 1);
        } else if (rule == "substitutions") {
            for (const auto& [before, after] : tables.substitutions)
                s = replace_all(s, before, after);
        } else if (rule == "removals") {
            for (const std::string& r : tables.removals) s = replace_all(s, r, "");
        } else if (rule == "extract-dollar") {
            s = rw_extract_dollar(s);
        } else if (rule == "unwrap-text") {
            s = rw_unwrap_lazy(s, "\\text{");
        } else if (rule == "unwrap-textbf") {
            s = rw_unwrap_lazy(s, "\\textbf{");
        } else if (rule == "unwrap-overline") {
            s = rw_unwrap_lazy(s, "\\overline{");
        } else if (rule == "unwrap-boxed") {
            s = rw_unwrap_boxed(s);
        } else if (rule == "expand-frac") {
            s = rw_expand_frac(s);
        } else if (rule == "expand-sqrt") {
            s = rw_expand_sqrt(s);
        } else if (rule == "strip-dollar") {
            s = replace_all(s, "$", "");
        } else if (rule == "collapse-comma-digits") {
            s = rw_collapse_comma_digits(s);
        } else {
            throw std::invalid_argument("unknown normalization rule: " + rule);
        }
    }
    return s;
}

namespace {

// Minimal arithmetic-literal evaluator with Python float semantics
// (true division, ** power, unary sign below **): int/float/scientific
// literals and parentheses; division by zero, complex results and overflow
// all fail the parse.
class LiteralEval {
public:
    LiteralEval(std::string_view s) : s_(s) {}

    std::optional<double> run() {
        skip_ws();
        std::optional<double> v = expr();
        if (!v) return std::nullopt;
        skip_ws();
        if (i_ != s_.size()) return std::nullopt;
        if (!std::isfinite(*v)) return std::nullopt;
        return v;
    }

private:
    std::string_view s_;
    std::size_t i_ = 0;

    void skip_ws() {
        while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t')) ++i_;
    }
    bool eat(char c) {
        skip_ws();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    bool peek2(const char* two) {
        skip_ws();
        return i_ + 1 < s_.size() && s_[i_] == two[0] && s_[i_ + 1] == two[1];
    }

    std::optional<double> expr() {
        std::optional<double> acc = term();
        if (!acc) return std::nullopt;
        while (true) {
            skip_ws();
            if (i_ < s_.size() && s_[i_] == '+') {
                ++i_;
                auto r = term();
                if (!r) return std::nullopt;
                acc = *acc + *r;
            } else if (i_ < s_.size() && s_[i_] == '-') {
                ++i_;
                auto r = term();
                if (!r) return std::nullopt;
                acc = *acc - *r;
            } else {
                return acc;
            }
        }
    }

    std::optional<double> term() {
        std::optional<double> acc = factor();
        if (!acc) return std::nullopt;
        while (true) {
            skip_ws();
            if (i_ < s_.size() && s_[i_] == '*') {
                ++i_;
                auto r = factor();
                if (!r) return std::nullopt;
                acc = *acc * *r;
            } else if (i_ < s_.size() && s_[i_] == '/') {
                ++i_;
                auto r = factor();
                if (!r) return std::nullopt;
                if (*r == 0.0) return std::nullopt;  // ZeroDivisionError
                acc = *acc / *r;
            } else {
                return acc;
            }
        }
    }

    std::optional<double> factor() {
        skip_ws();
        if (i_ < s_.size() && (s_[i_] == '+' || s_[i_] == '-')) {
            bool neg = s_[i_] == '-';
            ++i_;
            auto v = factor();
            if (!v) return std::nullopt;
            return neg ? -*v : *v;
        }
        return power();
    }

    std::optional<double> power() {
        std::optional<double> base = atom();
        if (!base) return std::nullopt;
        skip_ws();
        if (peek2("**")) {
            i_ += 2;
            auto e = factor();  // right-assoc, unary sign allowed on exponent
            if (!e) return std::nullopt;
            if (*base < 0.0 && *e != std::floor(*e)) return std::nullopt;  // complex
            if (*base == 0.0 && *e < 0.0) return std::nullopt;
            return std::pow(*base, *e);
        }
        return base;
    }

    std::optional<double> atom() {
        skip_ws();
        if (eat('(')) {
            auto v = expr();
            if (!v || !eat(')')) return std::nullopt;
            return v;
        }
        std::size_t start = i_;
        bool any_digit = false, dot = false;
        while (i_ < s_.size()) {
            char c = s_[i_];
            if (c >= '0' && c <= '9') {
                any_digit = true;
                ++i_;
            } else if (c == '.' && !dot) {
                dot = true;
                ++i_;
            } else {
                break;
            }
        }
        if (!any_digit) return std::nullopt;
        // exponent suffix
        if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
            std::size_t save = i_;
            ++i_;
            if (i_ < s_.size() && (s_[i_] == '+' || s_[i_] == '-')) ++i_;
            bool exp_digit = false;
            while (i_ < s_.size() && s_[i_] >= '0' && s_[i_] <= '9') {
                exp_digit = true;
                ++i_;
            }
            if (!exp_digit) i_ = save;
        }
        std::string lit(s_.substr(start, i_ - start));
        char* end = nullptr;
        double v = std::strtod(lit.c_str(), &end);
        if (end != lit.c_str() + lit.size()) return std::nullopt;
        return v;
    }
};

}  // namespace

std::optional<double> normalize_numeric(std::string_view raw) {
    return normalize_numeric(raw, NormalizationTables::builtin());
}

std::optional<double> normalize_numeric(std::string_view raw, const NormalizationTables& tables) {
    std::string s(raw);
    for (const std::string& unit : tables.units) {
        s = replace_all(s, unit, "");
        s = strip(s);
    }
    for (const std::string& mu : tables.maybe_units) {
        s = replace_all(s, "\\mathrm{" + mu + "}", "");
        s = replace_all(s, "\\mathrm{~" + mu + "}", "");
        s = strip(s);
    }
    std::size_t b = s.find_first_not_of('$');
    std::size_t e = s.find_last_not_of('$');
    s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);

    if (auto v = LiteralEval(s).run()) return v;

    try {
        sym::ExprPtr expr = sym::parse_latex(s);
        if (!sym::free_variables(expr).empty()) return std::nullopt;
        switch (expr->kind) {
            case sym::Kind::Equation:
            case sym::Kind::Interval:
            case sym::Kind::Tuple:
            case sym::Kind::Text:
                return std::nullopt;
            default:
                break;
        }
        BigComplex v = sym::eval_numeric(expr, {}, 30, /*allow_complex=*/false);
        if (!v.im.is_zero()) return std::nullopt;
        double d = v.re.to_double();
        if (!std::isfinite(d)) return std::nullopt;  // overflow reads as unparseable
        return d;
    } catch (const sym::ParseError&) {
        return std::nullopt;
    } catch (const sym::EvalError&) {
        return std::nullopt;
    }
}

std::optional<sym::ExprPtr> normalize_symbolic(std::string_view raw, SymbolicWant want) {
    std::string s(raw);
    if (s.size() >= 2 && s.substr(0, 2) == "\\[") s = s.substr(2);
    if (s.size() >= 2 && s.substr(s.size() - 2) == "\\]") s = s.substr(0, s.size() - 2);
    s = replace_all(s, "\\left(", "(");
    s = replace_all(s, "\\right)", ")");
    s = replace_all(s, "\\\\", "\\");
    if (!s.empty() && (s.front() == '$' || s.back() == '$')) {
        std::size_t b = s.find_first_not_of('$');
        std::size_t e = s.find_last_not_of('$');
        s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    }
    sym::ExprPtr expr;
    try {
        expr = sym::parse_latex(s);
    } catch (const sym::ParseError&) {
        return std::nullopt;
    }
    bool is_eq = expr->kind == sym::Kind::Equation;
    if (want == SymbolicWant::Expression) {
        if (is_eq) return std::nullopt;
        return expr;
    }
    if (!is_eq) return std::nullopt;
    // degenerate relations (both sides plain numbers, or identical sides)
    // auto-evaluate to a boolean in the original grader and yield none
    if (sym::equal(expr->kids[0], expr->kids[1])) return std::nullopt;
    sym::ExprPtr cl = sym::canonicalize(expr->kids[0]);
    sym::ExprPtr cr = sym::canonicalize(expr->kids[1]);
    if (sym::is_number(cl) && sym::is_number(cr)) return std::nullopt;
    return expr;
}

}  // namespace matheval::answers
