#include "matheval/expr.hpp"

namespace matheval::sym {

namespace {

ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

int kind_rank(Kind k) {
    switch (k) {
        case Kind::Number: return 0;
        case Kind::Constant: return 1;
        case Kind::Variable: return 2;
        case Kind::Pow: return 3;
        case Kind::Root: return 4;
        case Kind::Func: return 5;
        case Kind::Mul: return 6;
        case Kind::Add: return 7;
        case Kind::Neg: return 8;
        case Kind::Sub: return 9;
        case Kind::Div: return 10;
        case Kind::Equation: return 11;
        case Kind::Interval: return 12;
        case Kind::Tuple: return 13;
        case Kind::Text: return 14;
    }
    return 15;
}

}  // namespace

ExprPtr make_number(Rational r) {
    Expr e;
    e.kind = Kind::Number;
    e.number = std::move(r);
    return make(std::move(e));
}

ExprPtr make_int(long long v) { return make_number(Rational(v)); }

ExprPtr make_constant(ConstKind c) {
    Expr e;
    e.kind = Kind::Constant;
    e.constant = c;
    return make(std::move(e));
}

ExprPtr make_variable(std::string name) {
    Expr e;
    e.kind = Kind::Variable;
    e.label = std::move(name);
    return make(std::move(e));
}

ExprPtr make_text(std::string content) {
    Expr e;
    e.kind = Kind::Text;
    e.label = std::move(content);
    return make(std::move(e));
}

ExprPtr make_neg(ExprPtr x) {
    Expr e;
    e.kind = Kind::Neg;
    e.kids.push_back(std::move(x));
    return make(std::move(e));
}

ExprPtr make_binary(Kind k, ExprPtr a, ExprPtr b) {
    Expr e;
    e.kind = k;
    e.kids.push_back(std::move(a));
    e.kids.push_back(std::move(b));
    return make(std::move(e));
}

ExprPtr make_nary(Kind k, std::vector<ExprPtr> kids) {
    Expr e;
    e.kind = k;
    e.kids = std::move(kids);
    return make(std::move(e));
}

ExprPtr make_func(std::string name, std::vector<ExprPtr> args) {
    Expr e;
    e.kind = Kind::Func;
    e.label = std::move(name);
    e.kids = std::move(args);
    return make(std::move(e));
}

ExprPtr make_interval(ExprPtr lo, bool lo_open, ExprPtr hi, bool hi_open) {
    Expr e;
    e.kind = Kind::Interval;
    e.kids.push_back(std::move(lo));
    e.kids.push_back(std::move(hi));
    e.lo_open = lo_open;
    e.hi_open = hi_open;
    return make(std::move(e));
}

bool is_number(const ExprPtr& e) { return e->kind == Kind::Number; }
bool is_zero(const ExprPtr& e) { return e->kind == Kind::Number && e->number.is_zero(); }
bool is_one(const ExprPtr& e) { return e->kind == Kind::Number && e->number.is_one(); }

int compare(const ExprPtr& a, const ExprPtr& b) {
    if (a.get() == b.get()) return 0;
    int ra = kind_rank(a->kind), rb = kind_rank(b->kind);
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (a->kind) {
        case Kind::Number:
            return Rational::compare(a->number, b->number);
        case Kind::Constant:
            return a->constant == b->constant ? 0
                   : static_cast<int>(a->constant) < static_cast<int>(b->constant) ? -1 : 1;
        case Kind::Variable:
        case Kind::Text:
            return a->label.compare(b->label) < 0 ? -1 : a->label == b->label ? 0 : 1;
        case Kind::Func: {
            int c = a->label.compare(b->label);
            if (c != 0) return c < 0 ? -1 : 1;
            break;
        }
        case Kind::Interval: {
            if (a->lo_open != b->lo_open) return a->lo_open ? 1 : -1;
            if (a->hi_open != b->hi_open) return a->hi_open ? 1 : -1;
            break;
        }
        default:
            break;
    }
    if (a->kids.size() != b->kids.size()) return a->kids.size() < b->kids.size() ? -1 : 1;
    for (std::size_t i = 0; i < a->kids.size(); ++i) {
        int c = compare(a->kids[i], b->kids[i]);
        if (c != 0) return c;
    }
    return 0;
}

bool equal(const ExprPtr& a, const ExprPtr& b) { return compare(a, b) == 0; }

namespace {

void render(const ExprPtr& e, std::string& out) {
    switch (e->kind) {
        case Kind::Number:
            out += e->number.to_string();
            break;
        case Kind::Constant:
            out += e->constant == ConstKind::Pi ? "pi" : e->constant == ConstKind::E ? "e" : "i";
            break;
        case Kind::Variable:
            out += e->label;
            break;
        case Kind::Text:
            out += '"';
            out += e->label;
            out += '"';
            break;
        case Kind::Neg:
            out += "-(";
            render(e->kids[0], out);
            out += ')';
            break;
        case Kind::Add:
        case Kind::Mul: {
            const char* op = e->kind == Kind::Add ? " + " : "*";
            out += '(';
            for (std::size_t i = 0; i < e->kids.size(); ++i) {
                if (i) out += op;
                render(e->kids[i], out);
            }
            out += ')';
            break;
        }
        case Kind::Sub:
        case Kind::Div:
        case Kind::Pow: {
            const char* op = e->kind == Kind::Sub ? " - " : e->kind == Kind::Div ? "/" : "^";
            out += '(';
            render(e->kids[0], out);
            out += op;
            render(e->kids[1], out);
            out += ')';
            break;
        }
        case Kind::Root:
            out += "root(";
            render(e->kids[0], out);
            out += ", ";
            render(e->kids[1], out);
            out += ')';
            break;
        case Kind::Func:
            out += e->label;
            out += '(';
            for (std::size_t i = 0; i < e->kids.size(); ++i) {
                if (i) out += ", ";
                render(e->kids[i], out);
            }
            out += ')';
            break;
        case Kind::Equation:
            render(e->kids[0], out);
            out += " = ";
            render(e->kids[1], out);
            break;
        case Kind::Interval:
            out += e->lo_open ? '(' : '[';
            render(e->kids[0], out);
            out += ", ";
            render(e->kids[1], out);
            out += e->hi_open ? ')' : ']';
            break;
        case Kind::Tuple:
            out += '(';
            for (std::size_t i = 0; i < e->kids.size(); ++i) {
                if (i) out += ", ";
                render(e->kids[i], out);
            }
            out += ')';
            break;
    }
}

void collect_vars(const ExprPtr& e, std::set<std::string>& out) {
    if (e->kind == Kind::Variable) out.insert(e->label);
    for (const auto& k : e->kids) collect_vars(k, out);
}

}  // namespace

std::string to_string(const ExprPtr& e) {
    std::string out;
    render(e, out);
    return out;
}

std::set<std::string> free_variables(const ExprPtr& e) {
    std::set<std::string> out;
    collect_vars(e, out);
    return out;
}

bool contains_constant(const ExprPtr& e, ConstKind c) {
    if (e->kind == Kind::Constant && e->constant == c) return true;
    for (const auto& k : e->kids)
        if (contains_constant(k, c)) return true;
    return false;
}

}  // namespace matheval::sym
