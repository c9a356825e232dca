#include "matheval/expr.hpp"

#include <array>
#include <cctype>

namespace matheval::sym {

namespace {

constexpr std::size_t kMaxInput = 4096;

enum class TokKind {
    Number, Var, Const, Func, Frac, Sqrt, Binom,
    LParen, RParen, LBrack, RBrack, LBrace, RBrace,
    Plus, Minus, Star, Slash, Caret, Bang, Eq, Comma, Bar,
    End,
};

struct Token {
    TokKind kind;
    std::size_t pos;
    Rational number;       // Number
    std::string text;      // Var name / Func name / Const name
};

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

const std::array<const char*, 7> kFuncNames = {"sin", "cos", "tan", "log", "ln", "exp", "abs"};

bool is_func_name(std::string_view s) {
    for (const char* f : kFuncNames)
        if (s == f) return true;
    return false;
}

class Lexer {
public:
    Lexer(std::string_view s, std::size_t start) : s_(s), i_(start) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (i_ < s_.size()) {
            char c = s_[i_];
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                ++i_;
                continue;
            }
            std::size_t pos = i_;
            if (is_digit(c) || (c == '.' && i_ + 1 < s_.size() && is_digit(s_[i_ + 1]))) {
                out.push_back(lex_number(pos));
            } else if (c == '\\') {
                lex_command(out, pos);
            } else if (is_alpha(c)) {
                lex_letters(out, pos);
            } else {
                out.push_back(lex_symbol(pos));
            }
        }
        out.push_back({TokKind::End, s_.size(), {}, {}});
        return out;
    }

private:
    std::string_view s_;
    std::size_t i_;

    Token lex_number(std::size_t pos) {
        std::size_t start = i_;
        while (i_ < s_.size() && is_digit(s_[i_])) ++i_;
        if (i_ < s_.size() && s_[i_] == '.' && i_ + 1 < s_.size() && is_digit(s_[i_ + 1])) {
            ++i_;
            while (i_ < s_.size() && is_digit(s_[i_])) ++i_;
        }
        Token t{TokKind::Number, pos, {}, {}};
        t.number = Rational::from_decimal_string(s_.substr(start, i_ - start));
        return t;
    }

    void lex_command(std::vector<Token>& out, std::size_t pos) {
        ++i_;  // backslash
        std::size_t start = i_;
        while (i_ < s_.size() && is_alpha(s_[i_])) ++i_;
        std::string name(s_.substr(start, i_ - start));
        if (name.empty()) throw ParseError("stray backslash", pos);
        if (name == "left" || name == "right") return;  // purely visual
        if (name == "pi") { out.push_back({TokKind::Const, pos, {}, "pi"}); return; }
        if (name == "frac" || name == "tfrac" || name == "dfrac") {
            out.push_back({TokKind::Frac, pos, {}, {}});
            return;
        }
        if (name == "sqrt") { out.push_back({TokKind::Sqrt, pos, {}, {}}); return; }
        if (name == "binom") { out.push_back({TokKind::Binom, pos, {}, {}}); return; }
        if (name == "cdot" || name == "times") {
            out.push_back({TokKind::Star, pos, {}, {}});
            return;
        }
        if (is_func_name(name)) {
            out.push_back({TokKind::Func, pos, {}, name});
            return;
        }
        throw ParseError("unknown command \\" + name, pos);
    }

    // Letter runs: greedy known names (functions and pi), otherwise single-letter
    // variables so that juxtaposed products like "bs" read as b*s. 'e' and 'i'
    // lex as constants; an optional subscript attaches to a variable.
    void lex_letters(std::vector<Token>& out, std::size_t pos) {
        for (const char* f : {"sqrt", "frac", "binom", "sin", "cos", "tan", "log",
                              "ln", "exp", "abs", "pi"}) {
            std::string_view fs(f);
            if (s_.substr(i_).substr(0, fs.size()) == fs) {
                i_ += fs.size();
                if (fs == "sqrt") out.push_back({TokKind::Sqrt, pos, {}, {}});
                else if (fs == "frac") out.push_back({TokKind::Frac, pos, {}, {}});
                else if (fs == "binom") out.push_back({TokKind::Binom, pos, {}, {}});
                else if (fs == "pi") out.push_back({TokKind::Const, pos, {}, "pi"});
                else out.push_back({TokKind::Func, pos, {}, std::string(fs)});
                return;
            }
        }
        char c = s_[i_++];
        if (c == 'e') { out.push_back({TokKind::Const, pos, {}, "e"}); return; }
        if (c == 'i') { out.push_back({TokKind::Const, pos, {}, "i"}); return; }
        std::string name(1, c);
        if (i_ < s_.size() && s_[i_] == '_') {
            ++i_;
            name.push_back('_');
            if (i_ < s_.size() && s_[i_] == '{') {
                ++i_;
                while (i_ < s_.size() && s_[i_] != '}') name.push_back(s_[i_++]);
                if (i_ >= s_.size()) throw ParseError("unterminated subscript", pos);
                ++i_;
            } else if (i_ < s_.size() && (is_alpha(s_[i_]) || is_digit(s_[i_]))) {
                name.push_back(s_[i_++]);
            } else {
                throw ParseError("bad subscript", i_);
            }
        }
        out.push_back({TokKind::Var, pos, {}, name});
    }

    Token lex_symbol(std::size_t pos) {
        char c = s_[i_++];
        switch (c) {
            case '(': return {TokKind::LParen, pos, {}, {}};
            case ')': return {TokKind::RParen, pos, {}, {}};
            case '[': return {TokKind::LBrack, pos, {}, {}};
            case ']': return {TokKind::RBrack, pos, {}, {}};
            case '{': return {TokKind::LBrace, pos, {}, {}};
            case '}': return {TokKind::RBrace, pos, {}, {}};
            case '+': return {TokKind::Plus, pos, {}, {}};
            case '-': return {TokKind::Minus, pos, {}, {}};
            case '*': return {TokKind::Star, pos, {}, {}};
            case '/': return {TokKind::Slash, pos, {}, {}};
            case '^': return {TokKind::Caret, pos, {}, {}};
            case '!': return {TokKind::Bang, pos, {}, {}};
            case '=': return {TokKind::Eq, pos, {}, {}};
            case ',': return {TokKind::Comma, pos, {}, {}};
            case '|': return {TokKind::Bar, pos, {}, {}};
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", pos);
        }
    }
};

class Parser {
public:
    Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    ExprPtr parse_top() {
        // a single top-level '=' makes an equation
        std::size_t eq = find_toplevel_eq();
        if (eq != npos) {
            std::size_t second = find_toplevel_eq(eq + 1);
            if (second != npos) throw ParseError("more than one '='", toks_[second].pos);
            ExprPtr lhs = parse_range(0, eq);
            ExprPtr rhs = parse_range(eq + 1, toks_.size() - 1);
            return make_binary(Kind::Equation, lhs, rhs);
        }
        return parse_range(0, toks_.size() - 1);
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::vector<Token> toks_;
    std::size_t p_ = 0, end_ = 0;
    int bar_depth_ = 0;

    const Token& cur() const { return toks_[p_]; }
    bool at_end() const { return p_ >= end_; }

    std::size_t find_toplevel_eq(std::size_t from = 0) const {
        int depth = 0;
        for (std::size_t i = from; i + 1 < toks_.size(); ++i) {
            switch (toks_[i].kind) {
                case TokKind::LParen:
                case TokKind::LBrack:
                case TokKind::LBrace: ++depth; break;
                case TokKind::RParen:
                case TokKind::RBrack:
                case TokKind::RBrace: --depth; break;
                case TokKind::Eq:
                    if (depth == 0) return i;
                    break;
                default: break;
            }
        }
        return npos;
    }

    // Parses tokens [from, to) as an interval, tuple, or plain expression.
    ExprPtr parse_range(std::size_t from, std::size_t to) {
        p_ = from;
        end_ = to;
        if (p_ >= end_) throw ParseError("empty expression", from < toks_.size() ? toks_[from].pos : 0);
        ExprPtr out = parse_sequence();
        if (!at_end()) throw ParseError("trailing input", cur().pos);
        return out;
    }

    // interval / tuple / bare comma list / expression
    ExprPtr parse_sequence() {
        TokKind first = cur().kind;
        if (first == TokKind::LParen || first == TokKind::LBrack) {
            std::size_t close = matching_close(p_);
            if (close == end_ - 1) {
                std::vector<std::size_t> commas = toplevel_commas(p_ + 1, close);
                if (!commas.empty()) return parse_bracketed_sequence(close, commas);
            }
        }
        std::vector<std::size_t> commas = toplevel_commas(p_, end_);
        if (!commas.empty()) {
            // bare comma-separated list becomes an ordered tuple
            std::vector<ExprPtr> items;
            std::size_t start = p_;
            for (std::size_t c : commas) {
                items.push_back(subparse(start, c));
                start = c + 1;
            }
            items.push_back(subparse(start, end_));
            p_ = end_;
            return make_nary(Kind::Tuple, std::move(items));
        }
        return parse_expr();
    }

    ExprPtr parse_bracketed_sequence(std::size_t close, const std::vector<std::size_t>& commas) {
        bool lo_square = cur().kind == TokKind::LBrack;
        TokKind closer = toks_[close].kind;
        if (closer != TokKind::RParen && closer != TokKind::RBrack)
            throw ParseError("mismatched bracket", toks_[close].pos);
        bool hi_square = closer == TokKind::RBrack;
        std::size_t open = p_;
        if (commas.size() == 1 && (lo_square || hi_square)) {
            ExprPtr lo = subparse(open + 1, commas[0]);
            ExprPtr hi = subparse(commas[0] + 1, close);
            p_ = end_;
            return make_interval(lo, !lo_square, hi, !hi_square);
        }
        // tuple: round brackets, or many commas
        std::vector<ExprPtr> items;
        std::size_t start = open + 1;
        for (std::size_t c : commas) {
            items.push_back(subparse(start, c));
            start = c + 1;
        }
        items.push_back(subparse(start, close));
        p_ = end_;
        return make_nary(Kind::Tuple, std::move(items));
    }

    ExprPtr subparse(std::size_t from, std::size_t to) {
        std::size_t save_p = p_, save_end = end_;
        ExprPtr out = parse_range(from, to);
        p_ = save_p;
        end_ = save_end;
        return out;
    }

    std::size_t matching_close(std::size_t open) const {
        int depth = 0;
        for (std::size_t i = open; i < end_; ++i) {
            switch (toks_[i].kind) {
                case TokKind::LParen:
                case TokKind::LBrack:
                case TokKind::LBrace: ++depth; break;
                case TokKind::RParen:
                case TokKind::RBrack:
                case TokKind::RBrace:
                    --depth;
                    if (depth == 0) return i;
                    break;
                default: break;
            }
        }
        throw ParseError("unbalanced bracket", toks_[open].pos);
    }

    std::vector<std::size_t> toplevel_commas(std::size_t from, std::size_t to) const {
        std::vector<std::size_t> out;
        int depth = 0;
        for (std::size_t i = from; i < to; ++i) {
            switch (toks_[i].kind) {
                case TokKind::LParen:
                case TokKind::LBrack:
                case TokKind::LBrace: ++depth; break;
                case TokKind::RParen:
                case TokKind::RBrack:
                case TokKind::RBrace: --depth; break;
                case TokKind::Comma:
                    if (depth == 0) out.push_back(i);
                    break;
                default: break;
            }
        }
        return out;
    }

    ExprPtr parse_expr() {
        ExprPtr acc = parse_mulchain();
        while (!at_end() && (cur().kind == TokKind::Plus || cur().kind == TokKind::Minus)) {
            bool minus = cur().kind == TokKind::Minus;
            ++p_;
            ExprPtr rhs = parse_mulchain();
            acc = make_binary(minus ? Kind::Sub : Kind::Add, acc, rhs);
        }
        return acc;
    }

    bool starts_operand() const {
        if (at_end()) return false;
        switch (cur().kind) {
            case TokKind::Number:
            case TokKind::Var:
            case TokKind::Const:
            case TokKind::Func:
            case TokKind::Frac:
            case TokKind::Sqrt:
            case TokKind::Binom:
            case TokKind::LParen:
            case TokKind::LBrace:
                return true;
            case TokKind::Bar:
                return bar_depth_ == 0;
            default:
                return false;
        }
    }

    ExprPtr parse_mulchain() {
        ExprPtr acc = parse_unary();
        while (!at_end()) {
            if (cur().kind == TokKind::Star) {
                ++p_;
                acc = make_nary(Kind::Mul, {acc, parse_unary()});
            } else if (cur().kind == TokKind::Slash) {
                std::size_t pos = cur().pos;
                ++p_;
                ExprPtr rhs = parse_unary();
                if (is_zero(rhs)) throw ParseError("zero denominator", pos);
                acc = make_binary(Kind::Div, acc, rhs);
            } else if (starts_operand()) {
                acc = make_nary(Kind::Mul, {acc, parse_unary()});
            } else {
                break;
            }
        }
        return acc;
    }

    ExprPtr parse_unary() {
        if (!at_end() && (cur().kind == TokKind::Plus || cur().kind == TokKind::Minus)) {
            bool minus = cur().kind == TokKind::Minus;
            ++p_;
            ExprPtr inner = parse_unary();
            if (!minus) return inner;
            if (is_number(inner)) return make_number(-inner->number);  // fold literal sign
            return make_neg(inner);
        }
        return parse_postfix();
    }

    ExprPtr parse_postfix() {
        ExprPtr acc = parse_atom();
        while (!at_end()) {
            if (cur().kind == TokKind::Caret) {
                ++p_;
                acc = make_binary(Kind::Pow, acc, parse_exponent());
            } else if (cur().kind == TokKind::Bang) {
                ++p_;
                acc = make_func("factorial", {acc});
            } else {
                break;
            }
        }
        return acc;
    }

    ExprPtr parse_exponent() {
        if (at_end()) throw ParseError("missing exponent", toks_.back().pos);
        if (cur().kind == TokKind::LBrace) return parse_braced();
        bool neg = false;
        while (cur().kind == TokKind::Plus || cur().kind == TokKind::Minus) {
            if (cur().kind == TokKind::Minus) neg = !neg;
            ++p_;
            if (at_end()) throw ParseError("missing exponent", toks_.back().pos);
        }
        ExprPtr e;
        switch (cur().kind) {
            case TokKind::Number:
                e = make_number(cur().number);
                ++p_;
                break;
            case TokKind::Var:
                e = make_variable(cur().text);
                ++p_;
                break;
            case TokKind::Const:
                e = const_token(cur());
                ++p_;
                break;
            case TokKind::LParen:
                e = parse_parenthesized();
                break;
            case TokKind::Frac:
            case TokKind::Sqrt:
                e = parse_atom();
                break;
            default:
                throw ParseError("bad exponent", cur().pos);
        }
        if (neg) {
            if (is_number(e)) return make_number(-e->number);
            return make_neg(e);
        }
        return e;
    }

    ExprPtr const_token(const Token& t) {
        if (t.text == "pi") return make_constant(ConstKind::Pi);
        if (t.text == "e") return make_constant(ConstKind::E);
        return make_constant(ConstKind::I);
    }

    ExprPtr parse_braced() {
        if (at_end() || cur().kind != TokKind::LBrace)
            throw ParseError("expected '{'", at_end() ? toks_.back().pos : cur().pos);
        std::size_t close = matching_close(p_);
        ExprPtr inner = subparse(p_ + 1, close);
        p_ = close + 1;
        return inner;
    }

    ExprPtr parse_parenthesized() {
        std::size_t close = matching_close(p_);
        ExprPtr inner = subparse(p_ + 1, close);
        p_ = close + 1;
        return inner;
    }

    ExprPtr parse_atom() {
        if (at_end()) throw ParseError("unexpected end of input", toks_.back().pos);
        const Token t = cur();
        switch (t.kind) {
            case TokKind::Number:
                ++p_;
                return make_number(t.number);
            case TokKind::Var:
                ++p_;
                return make_variable(t.text);
            case TokKind::Const:
                ++p_;
                return const_token(t);
            case TokKind::LParen:
                return parse_parenthesized();
            case TokKind::LBrace:
                return parse_braced();
            case TokKind::Frac: {
                ++p_;
                ExprPtr a = parse_braced();
                ExprPtr b = parse_braced();
                if (is_zero(b)) throw ParseError("zero denominator", t.pos);
                if (is_number(a) && is_number(b)) return make_number(a->number / b->number);
                return make_binary(Kind::Div, a, b);
            }
            case TokKind::Sqrt: {
                ++p_;
                ExprPtr order = make_int(2);
                if (!at_end() && cur().kind == TokKind::LBrack) {
                    std::size_t close = matching_close(p_);
                    order = subparse(p_ + 1, close);
                    p_ = close + 1;
                }
                ExprPtr arg = (!at_end() && cur().kind == TokKind::LBrace) ? parse_braced()
                                                                           : parse_postfix();
                return make_binary(Kind::Root, arg, order);
            }
            case TokKind::Binom: {
                ++p_;
                ExprPtr a = parse_braced();
                ExprPtr b = parse_braced();
                return make_func("binomial", {a, b});
            }
            case TokKind::Func: {
                ++p_;
                ExprPtr arg;
                if (!at_end() && cur().kind == TokKind::LParen) arg = parse_parenthesized();
                else if (!at_end() && cur().kind == TokKind::LBrace) arg = parse_braced();
                else arg = parse_postfix();
                return make_func(t.text, {arg});
            }
            case TokKind::Bar: {
                ++p_;
                ++bar_depth_;
                ExprPtr inner = parse_expr();
                if (at_end() || cur().kind != TokKind::Bar)
                    throw ParseError("unterminated '|'", t.pos);
                ++p_;
                --bar_depth_;
                return make_func("abs", {inner});
            }
            default:
                throw ParseError("unexpected token", t.pos);
        }
    }
};

bool all_alpha(std::string_view s) {
    for (char c : s)
        if (!is_alpha(c)) return false;
    return !s.empty();
}

}  // namespace

ExprPtr parse_latex(std::string_view s) {
    if (s.size() > kMaxInput) throw ParseError("input too long", kMaxInput);
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    std::string_view t = s.substr(b, e - b);
    if (t.empty()) throw ParseError("empty input", 0);

    // A whole-string bare word is a text literal ("east", "Friday"); short
    // runs of letters ("xy", "bs") keep their product-of-variables reading,
    // and names the grammar knows stay functional.
    if (t.size() >= 2 && all_alpha(t)) {
        if (t == "pi") return make_constant(ConstKind::Pi);
        if (t.size() >= 4 && !is_func_name(t)) return make_text(std::string(t));
    }

    Lexer lex(s.substr(0, e), b);
    std::vector<Token> toks;
    try {
        toks = lex.run();
    } catch (const std::invalid_argument& ex) {
        throw ParseError(ex.what(), b);
    }
    Parser parser(std::move(toks));
    return parser.parse_top();
}

}  // namespace matheval::sym
