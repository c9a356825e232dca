#include "matheval/expr.hpp"

#include <algorithm>
#include <cctype>
#include <random>

namespace matheval::sym {

namespace {

enum class Shape { Scalar, Text, Equation, Interval, Tuple };

Shape shape_of(const ExprPtr& e) {
    switch (e->kind) {
        case Kind::Text: return Shape::Text;
        case Kind::Equation: return Shape::Equation;
        case Kind::Interval: return Shape::Interval;
        case Kind::Tuple: return Shape::Tuple;
        default: return Shape::Scalar;
    }
}

std::string fold_text(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    std::string out = s.substr(b, e - b);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

// nonzero numerator/denominator drawn uniformly from [-97, 97] \ {0}
long long draw_nonzero(std::mt19937_64& gen) {
    long long r = static_cast<long long>(gen() % 194);
    long long v = r - 97;
    if (v >= 0) ++v;
    return v;
}

Verdict combine(const std::vector<Verdict>& parts) {
    bool any_unknown = false;
    UnknownReason reason = UnknownReason::BudgetExhausted;
    for (const Verdict& v : parts) {
        if (v.is_distinct()) return Verdict::distinct();
        if (v.is_unknown() && !any_unknown) {
            any_unknown = true;
            reason = v.reason;
        }
    }
    if (any_unknown) return Verdict::unknown(reason);
    return Verdict::equivalent();
}

Verdict scalar_equivalent(const ExprPtr& a, const ExprPtr& b, const EquivalenceBudget& budget) {
    bool has_i = contains_constant(a, ConstKind::I) || contains_constant(b, ConstKind::I);
    std::set<std::string> vars = free_variables(a);
    std::set<std::string> bvars = free_variables(b);
    vars.insert(bvars.begin(), bvars.end());
    if (has_i && !vars.empty()) return Verdict::unknown(UnknownReason::BudgetExhausted);

    // canonical-zero route: simplify(a - b) == 0
    ExprPtr diff = make_binary(Kind::Sub, a, b);
    CanonicalResult cd = canonicalize(diff, budget.rewrite_steps);
    if (is_zero(cd.expr)) return Verdict::equivalent();

    CanonicalResult ca = canonicalize(a, budget.rewrite_steps);
    CanonicalResult cb = canonicalize(b, budget.rewrite_steps);
    if (ca.complete && cb.complete && is_number(ca.expr) && is_number(cb.expr)) {
        return equal(ca.expr, cb.expr) ? Verdict::equivalent() : Verdict::distinct();
    }

    // seeded numeric probing of the difference
    std::mt19937_64 gen(budget.seed);
    int probes = vars.empty() ? 1 : budget.numeric_probes;
    int successes = 0;
    BigFloat tol = BigFloat::from_double(budget.probe_tolerance);
    int prec = budget.precision_digits;
    for (int p = 0; p < probes; ++p) {
        Assignment asg;
        for (const std::string& v : vars) {
            long long num = draw_nonzero(gen);
            long long den = draw_nonzero(gen);
            asg.emplace(v, Rational(BigInt(num), BigInt(den)));
        }
        try {
            BigComplex va = eval_numeric(ca.expr, asg, prec, has_i);
            BigComplex vb = eval_numeric(cb.expr, asg, prec, has_i);
            BigFloat d = cx_abs(cx_sub(va, vb, prec), prec);
            BigFloat scale = cx_abs(va, prec);
            BigFloat sb = cx_abs(vb, prec);
            if (BigFloat::compare(sb, scale) > 0) scale = sb;
            if (BigFloat::compare(BigFloat::from_int(1), scale) > 0) scale = BigFloat::from_int(1);
            BigFloat limit = BigFloat::mul(tol, scale, prec);
            if (BigFloat::compare(d, limit) > 0) return Verdict::distinct();
            ++successes;
        } catch (const EvalError&) {
            // singular probe point: re-probe elsewhere
        }
    }
    if (successes >= 1) return Verdict::equivalent();
    return Verdict::unknown(UnknownReason::BudgetExhausted);
}

}  // namespace

Verdict equivalent(const ExprPtr& a, const ExprPtr& b, const EquivalenceBudget& budget) {
    if (budget.rewrite_steps <= 0 || budget.numeric_probes <= 0 ||
        budget.precision_digits <= 0 || budget.probe_tolerance <= 0)
        throw std::invalid_argument("equivalent: budget fields must be strictly positive");

    Shape sa = shape_of(a), sb = shape_of(b);
    if (sa != sb) return Verdict::unknown(UnknownReason::IncomparableKinds);
    switch (sa) {
        case Shape::Text:
            return fold_text(a->label) == fold_text(b->label) ? Verdict::equivalent()
                                                              : Verdict::distinct();
        case Shape::Tuple: {
            if (a->kids.size() != b->kids.size())
                return Verdict::unknown(UnknownReason::IncomparableKinds);
            std::vector<Verdict> parts;
            for (std::size_t i = 0; i < a->kids.size(); ++i)
                parts.push_back(equivalent(a->kids[i], b->kids[i], budget));
            return combine(parts);
        }
        case Shape::Interval: {
            if (a->lo_open != b->lo_open || a->hi_open != b->hi_open)
                return Verdict::distinct();
            std::vector<Verdict> parts;
            parts.push_back(equivalent(a->kids[0], b->kids[0], budget));
            parts.push_back(equivalent(a->kids[1], b->kids[1], budget));
            return combine(parts);
        }
        case Shape::Equation: {
            // compare with everything moved to one side, up to an overall sign
            ExprPtr da = make_binary(Kind::Sub, a->kids[0], a->kids[1]);
            ExprPtr db = make_binary(Kind::Sub, b->kids[0], b->kids[1]);
            Verdict straight = scalar_equivalent(da, db, budget);
            if (straight.is_equivalent()) return straight;
            Verdict flipped = scalar_equivalent(da, make_neg(db), budget);
            if (flipped.is_equivalent()) return flipped;
            if (straight.is_distinct() && flipped.is_distinct()) return Verdict::distinct();
            return straight.is_unknown() ? straight : flipped;
        }
        case Shape::Scalar:
            return scalar_equivalent(a, b, budget);
    }
    return Verdict::unknown(UnknownReason::BudgetExhausted);
}

}  // namespace matheval::sym
