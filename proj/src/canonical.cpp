#include "matheval/expr.hpp"

#include <algorithm>
#include <map>

namespace matheval::sym {

namespace {

struct CmpExpr {
    bool operator()(const ExprPtr& a, const ExprPtr& b) const { return compare(a, b) < 0; }
};

struct Ctx {
    long long steps;
    bool complete = true;
    bool spend(long long n = 1) {
        if (steps < n) {
            complete = false;
            return false;
        }
        steps -= n;
        return true;
    }
};

ExprPtr canon(const ExprPtr& e, Ctx& ctx);
ExprPtr canon_mul_list(std::vector<ExprPtr> factors, Ctx& ctx);
ExprPtr canon_pow(const ExprPtr& base, const ExprPtr& exp, Ctx& ctx);

const ExprPtr& one_expr() {
    static const ExprPtr kOne = make_int(1);
    return kOne;
}

// floor of p/q as BigInt
BigInt rational_floor(const Rational& r) {
    BigInt q, rem;
    BigInt::divmod(r.num(), r.den(), q, rem);
    if (!rem.is_zero() && r.num().is_negative()) q = q - BigInt(1);
    return q;
}

// m = a^2 * rest with the square part pulled out; bounded trial division,
// skipped entirely for very large radicands
void extract_square_part(const BigInt& m, BigInt& a, BigInt& rest) {
    a = BigInt(1);
    rest = m;
    if (rest.digit_count() > 18) return;
    BigInt r = BigInt::iroot(rest, 2);
    if (r * r == rest) {
        a = r;
        rest = BigInt(1);
        return;
    }
    long long d = 2;
    while (d <= 4096) {
        BigInt dd(d * d);
        if (dd > rest) break;
        while ((rest % dd).is_zero()) {
            rest = rest / dd;
            a = a * BigInt(d);
        }
        d = d == 2 ? 3 : d + 2;
    }
}

// term = coeff * key; null key marks a pure number
struct TermParts {
    Rational coeff;
    ExprPtr key;
};

TermParts split_term(const ExprPtr& t) {
    if (t->kind == Kind::Number) return {t->number, nullptr};
    if (t->kind == Kind::Mul && !t->kids.empty() && t->kids[0]->kind == Kind::Number) {
        if (t->kids.size() == 2) return {t->kids[0]->number, t->kids[1]};
        std::vector<ExprPtr> rest(t->kids.begin() + 1, t->kids.end());
        return {t->kids[0]->number, make_nary(Kind::Mul, std::move(rest))};
    }
    return {Rational(1), t};
}

ExprPtr term_from(const Rational& c, const ExprPtr& key) {
    if (!key) return make_number(c);
    if (c.is_one()) return key;
    std::vector<ExprPtr> kids;
    kids.push_back(make_number(c));
    if (key->kind == Kind::Mul) {
        kids.insert(kids.end(), key->kids.begin(), key->kids.end());
    } else {
        kids.push_back(key);
    }
    return make_nary(Kind::Mul, std::move(kids));
}

ExprPtr canon_add_list(std::vector<ExprPtr> terms, Ctx& ctx) {
    Rational constant(0);
    std::map<ExprPtr, Rational, CmpExpr> by_key;
    std::vector<ExprPtr> work(std::move(terms));
    for (std::size_t i = 0; i < work.size(); ++i) {
        const ExprPtr& t = work[i];
        if (t->kind == Kind::Add) {
            work.insert(work.end(), t->kids.begin(), t->kids.end());
            continue;
        }
        ctx.spend();
        TermParts p = split_term(t);
        if (!p.key) {
            constant = constant + p.coeff;
        } else {
            auto it = by_key.find(p.key);
            if (it == by_key.end()) by_key.emplace(p.key, p.coeff);
            else it->second = it->second + p.coeff;
        }
    }
    std::vector<ExprPtr> out;
    if (!constant.is_zero()) out.push_back(make_number(constant));
    for (const auto& [key, coeff] : by_key) {
        if (coeff.is_zero()) continue;
        out.push_back(term_from(coeff, key));
    }
    if (out.empty()) return make_int(0);
    if (out.size() == 1) return out[0];
    return make_nary(Kind::Add, std::move(out));
}

// folding bounds for exact numeric powers
bool can_fold_int_pow(const Rational& base, const Rational& exp) {
    if (!exp.is_integer() || !exp.num().fits_int64()) return false;
    long long e = exp.num().to_int64();
    if (e < 0 && base.is_zero()) return false;
    unsigned long long mag = e < 0 ? static_cast<unsigned long long>(-e)
                                   : static_cast<unsigned long long>(e);
    if (mag > 9999) return false;
    std::size_t digits = std::max(base.num().digit_count(), base.den().digit_count());
    return digits * mag <= 40000;
}

// canonical form of q^f for rational q and f = p'/q' in (0,1)
ExprPtr radical_form(const Rational& q, const Rational& f, Ctx& ctx) {
    BigInt pp = f.num(), qq = f.den();
    bool base_neg = q.is_negative();
    if (base_neg && (qq % BigInt(2)).is_zero()) {
        // even root of a negative rational: leave symbolic
        return make_binary(Kind::Pow, make_number(q), make_number(f));
    }
    Rational mag = base_neg ? -q : q;
    bool result_neg = base_neg && !(pp % BigInt(2)).is_zero();
    if (!qq.fits_int64() || qq.to_int64() > 64 || !pp.fits_int64()) {
        return make_binary(Kind::Pow, make_number(q), make_number(f));
    }
    unsigned order = static_cast<unsigned>(qq.to_int64());
    long long power = pp.to_int64();
    BigInt rn = BigInt::iroot(mag.num(), order);
    BigInt rd = BigInt::iroot(mag.den(), order);
    if (rn.pow(order) == mag.num() && rd.pow(order) == mag.den()) {
        Rational folded = Rational(rn, rd).pow(power);
        return make_number(result_neg ? -folded : folded);
    }
    if (order == 2) {
        // sqrt(n/d) = sqrt(n*d)/d, then pull the square part out
        ctx.spend(4);
        BigInt m = mag.num() * mag.den();
        BigInt a, rest;
        extract_square_part(m, a, rest);
        Rational coeff = Rational(a, mag.den());
        ExprPtr rad = make_binary(Kind::Pow, make_number(Rational(rest, BigInt(1))),
                                  make_number(Rational(1, 2)));
        if (result_neg) coeff = -coeff;
        if (coeff.is_one()) return rad;
        return make_nary(Kind::Mul, {make_number(coeff), rad});
    }
    ExprPtr pow = make_binary(Kind::Pow, make_number(mag), make_number(f));
    if (result_neg) return make_nary(Kind::Mul, {make_number(Rational(-1)), pow});
    return pow;
}

ExprPtr canon_pow(const ExprPtr& base, const ExprPtr& exp, Ctx& ctx) {
    ctx.spend();
    if (is_zero(exp)) return one_expr();
    if (is_one(exp)) return base;
    if (base->kind == Kind::Number && exp->kind == Kind::Number) {
        const Rational& b = base->number;
        const Rational& x = exp->number;
        if (x.is_integer()) {
            if (can_fold_int_pow(b, x)) return make_number(b.pow(x.num().to_int64()));
            return make_binary(Kind::Pow, base, exp);
        }
        // split x = w + f with f in (0,1)
        BigInt w = rational_floor(x);
        Rational f = x - Rational(w, BigInt(1));
        Rational whole_part(1);
        bool have_whole = !w.is_zero();
        if (have_whole) {
            Rational wr(w, BigInt(1));
            if (b.is_zero()) return make_binary(Kind::Pow, base, exp);
            if (!can_fold_int_pow(b, wr)) return make_binary(Kind::Pow, base, exp);
            whole_part = b.pow(w.to_int64());
        }
        ExprPtr frac_part = radical_form(b, f, ctx);
        if (!have_whole) return frac_part;
        return canon_mul_list({make_number(whole_part), frac_part}, ctx);
    }
    // (u^v)^n with integer n merges exponents
    if (base->kind == Kind::Pow && exp->kind == Kind::Number && exp->number.is_integer()) {
        ExprPtr inner_exp = canon_mul_list({base->kids[1], exp}, ctx);
        return canon_pow(base->kids[0], inner_exp, ctx);
    }
    // integer powers distribute over products: (2x)^3 -> 8 x^3
    if (base->kind == Kind::Mul && exp->kind == Kind::Number && exp->number.is_integer()) {
        std::vector<ExprPtr> parts;
        parts.reserve(base->kids.size());
        for (const auto& k : base->kids) parts.push_back(canon_pow(k, exp, ctx));
        return canon_mul_list(std::move(parts), ctx);
    }
    return make_binary(Kind::Pow, base, exp);
}

struct FactorAcc {
    std::vector<ExprPtr> exps;
};

ExprPtr canon_mul_list(std::vector<ExprPtr> factors, Ctx& ctx) {
    Rational coeff(1);
    std::map<ExprPtr, FactorAcc, CmpExpr> by_base;
    std::vector<ExprPtr> work(std::move(factors));
    for (std::size_t i = 0; i < work.size(); ++i) {
        const ExprPtr& f = work[i];
        if (f->kind == Kind::Mul) {
            work.insert(work.end(), f->kids.begin(), f->kids.end());
            continue;
        }
        ctx.spend();
        if (f->kind == Kind::Number) {
            coeff = coeff * f->number;
            continue;
        }
        if (f->kind == Kind::Pow) {
            by_base[f->kids[0]].exps.push_back(f->kids[1]);
        } else {
            by_base[f].exps.push_back(one_expr());
        }
    }
    if (coeff.is_zero()) return make_int(0);
    std::vector<ExprPtr> out;
    for (const auto& [base, acc] : by_base) {
        ExprPtr total = acc.exps.size() == 1 ? acc.exps[0]
                                             : canon_add_list(acc.exps, ctx);
        if (is_zero(total)) continue;
        ExprPtr folded = is_one(total) ? base : canon_pow(base, total, ctx);
        if (folded->kind == Kind::Number) {
            coeff = coeff * folded->number;
        } else if (folded->kind == Kind::Mul) {
            // a folded power may carry its own coefficient (e.g. 3^(-1/2))
            for (const auto& k : folded->kids) {
                if (k->kind == Kind::Number) coeff = coeff * k->number;
                else out.push_back(k);
            }
        } else {
            out.push_back(folded);
        }
    }
    if (coeff.is_zero()) return make_int(0);
    // a bare numeric coefficient distributes over a lone sum: -1*(a+b) -> -a-b
    if (!coeff.is_one() && out.size() == 1 && out[0]->kind == Kind::Add) {
        std::vector<ExprPtr> terms;
        terms.reserve(out[0]->kids.size());
        for (const auto& t : out[0]->kids)
            terms.push_back(canon_mul_list({make_number(coeff), t}, ctx));
        return canon_add_list(std::move(terms), ctx);
    }
    std::sort(out.begin(), out.end(), CmpExpr{});
    if (out.empty()) return make_number(coeff);
    if (coeff.is_one()) {
        if (out.size() == 1) return out[0];
        return make_nary(Kind::Mul, std::move(out));
    }
    std::vector<ExprPtr> with_coeff;
    with_coeff.push_back(make_number(coeff));
    with_coeff.insert(with_coeff.end(), out.begin(), out.end());
    return make_nary(Kind::Mul, std::move(with_coeff));
}

bool fits_small_nonneg_int(const ExprPtr& e, long long max, long long& out) {
    if (e->kind != Kind::Number || !e->number.is_integer() || !e->number.num().fits_int64())
        return false;
    long long v = e->number.num().to_int64();
    if (v < 0 || v > max) return false;
    out = v;
    return true;
}

ExprPtr canon_func(const std::string& name, std::vector<ExprPtr> args, Ctx& ctx) {
    ctx.spend();
    if (name == "abs" && args[0]->kind == Kind::Number) {
        const Rational& r = args[0]->number;
        return make_number(r.is_negative() ? -r : r);
    }
    if (name == "factorial") {
        long long n;
        if (fits_small_nonneg_int(args[0], 2000, n)) {
            BigInt acc(1);
            for (long long k = 2; k <= n; ++k) acc = acc * BigInt(k);
            ctx.spend(n / 16);
            return make_number(Rational(acc, BigInt(1)));
        }
    }
    if (name == "binomial" && args.size() == 2) {
        long long n, k;
        if (fits_small_nonneg_int(args[0], 2000, n) && fits_small_nonneg_int(args[1], 2000, k)) {
            if (k > n) return make_int(0);
            BigInt acc(1);
            for (long long j = 0; j < k; ++j) acc = acc * BigInt(n - j) / BigInt(j + 1);
            ctx.spend(k / 8);
            return make_number(Rational(acc, BigInt(1)));
        }
    }
    if (args.size() == 1 && is_zero(args[0])) {
        if (name == "sin" || name == "tan") return make_int(0);
        if (name == "cos" || name == "exp") return make_int(1);
    }
    if (args.size() == 1 && is_one(args[0])) {
        if (name == "ln" || name == "log") return make_int(0);
    }
    if (name == "ln" && args[0]->kind == Kind::Constant && args[0]->constant == ConstKind::E)
        return one_expr();
    return make_func(name, std::move(args));
}

ExprPtr canon(const ExprPtr& e, Ctx& ctx) {
    if (!ctx.spend()) return e;
    switch (e->kind) {
        case Kind::Number:
        case Kind::Constant:
        case Kind::Variable:
        case Kind::Text:
            return e;
        case Kind::Neg:
            return canon_mul_list({make_number(Rational(-1)), canon(e->kids[0], ctx)}, ctx);
        case Kind::Add: {
            std::vector<ExprPtr> kids;
            kids.reserve(e->kids.size());
            for (const auto& k : e->kids) kids.push_back(canon(k, ctx));
            return canon_add_list(std::move(kids), ctx);
        }
        case Kind::Sub: {
            ExprPtr a = canon(e->kids[0], ctx);
            ExprPtr b = canon_mul_list({make_number(Rational(-1)), canon(e->kids[1], ctx)}, ctx);
            return canon_add_list({a, b}, ctx);
        }
        case Kind::Mul: {
            std::vector<ExprPtr> kids;
            kids.reserve(e->kids.size());
            for (const auto& k : e->kids) kids.push_back(canon(k, ctx));
            return canon_mul_list(std::move(kids), ctx);
        }
        case Kind::Div: {
            ExprPtr a = canon(e->kids[0], ctx);
            ExprPtr b = canon_pow(canon(e->kids[1], ctx), make_number(Rational(-1)), ctx);
            return canon_mul_list({a, b}, ctx);
        }
        case Kind::Pow:
            return canon_pow(canon(e->kids[0], ctx), canon(e->kids[1], ctx), ctx);
        case Kind::Root: {
            ExprPtr radicand = canon(e->kids[0], ctx);
            ExprPtr order = canon(e->kids[1], ctx);
            ExprPtr inv;
            if (order->kind == Kind::Number && !order->number.is_zero()) {
                inv = make_number(order->number.reciprocal());
            } else {
                inv = canon_pow(order, make_number(Rational(-1)), ctx);
            }
            return canon_pow(radicand, inv, ctx);
        }
        case Kind::Func: {
            std::vector<ExprPtr> args;
            args.reserve(e->kids.size());
            for (const auto& k : e->kids) args.push_back(canon(k, ctx));
            return canon_func(e->label, std::move(args), ctx);
        }
        case Kind::Equation:
            return make_binary(Kind::Equation, canon(e->kids[0], ctx), canon(e->kids[1], ctx));
        case Kind::Interval:
            return make_interval(canon(e->kids[0], ctx), e->lo_open, canon(e->kids[1], ctx),
                                 e->hi_open);
        case Kind::Tuple: {
            std::vector<ExprPtr> kids;
            kids.reserve(e->kids.size());
            for (const auto& k : e->kids) kids.push_back(canon(k, ctx));
            return make_nary(Kind::Tuple, std::move(kids));
        }
    }
    return e;
}

}  // namespace

CanonicalResult canonicalize(const ExprPtr& e, int max_steps) {
    Ctx ctx{max_steps};
    ExprPtr out = canon(e, ctx);
    return {out, ctx.complete};
}

ExprPtr canonicalize(const ExprPtr& e) {
    return canonicalize(e, EquivalenceBudget{}.rewrite_steps).expr;
}

}  // namespace matheval::sym
