#include "matheval/expr.hpp"

namespace matheval::sym {

namespace {

struct EvalCtx {
    const Assignment& asg;
    int wp;
    bool allow_complex;
};

// normalized BigFloat mantissas carry no trailing zeros, so a value is an
// integer exactly when its exponent is non-negative
bool integral_value(const BigFloat& v, long long& out) {
    if (v.is_zero()) {
        out = 0;
        return true;
    }
    if (v.exponent() < 0) return false;
    if (v.mag10() > 15) return false;
    BigInt full = v.mantissa() * BigInt::pow10(static_cast<std::size_t>(v.exponent()));
    if (!full.fits_int64()) return false;
    out = full.to_int64();
    return true;
}

BigComplex ev(const ExprPtr& e, EvalCtx& c);

BigComplex cx_powi(BigComplex base, long long n, int wp) {
    if (n == 0) return {BigFloat::from_int(1), BigFloat()};
    bool inv = n < 0;
    unsigned long long m = inv ? static_cast<unsigned long long>(-n)
                               : static_cast<unsigned long long>(n);
    BigComplex acc{BigFloat::from_int(1), BigFloat()};
    while (m) {
        if (m & 1) acc = cx_mul(acc, base, wp);
        base = cx_mul(base, base, wp);
        m >>= 1;
    }
    if (!inv) return acc;
    return cx_div(BigComplex{BigFloat::from_int(1), BigFloat()}, acc, wp);
}

BigComplex ev_pow(const BigComplex& b, const BigComplex& x, EvalCtx& c) {
    long long n;
    if (x.im.is_zero() && integral_value(x.re, n) && n > -100000 && n < 100000) {
        if (b.re.is_zero() && b.im.is_zero()) {
            if (n <= 0) throw EvalError("zero base with non-positive exponent");
            return {BigFloat(), BigFloat()};
        }
        return cx_powi(b, n, c.wp);
    }
    if (b.re.is_zero() && b.im.is_zero()) {
        if (x.im.is_zero() && x.re.sign() > 0) return {BigFloat(), BigFloat()};
        throw EvalError("zero base with non-positive exponent");
    }
    if (b.is_real() && b.re.sign() > 0 && x.im.is_zero())
        return {bf_pow(b.re, x.re, c.wp), BigFloat()};
    if (!c.allow_complex)
        throw EvalError("non-integer power of a negative base in real mode");
    return cx_pow(b, x, c.wp);
}

BigComplex ev_func(const ExprPtr& e, EvalCtx& c) {
    const std::string& f = e->label;
    if (f == "binomial") {
        if (e->kids.size() != 2) throw EvalError("binomial expects two arguments");
        BigComplex na = ev(e->kids[0], c), ka = ev(e->kids[1], c);
        long long n, k;
        if (!na.is_real() || !ka.is_real() || !integral_value(na.re, n) ||
            !integral_value(ka.re, k) || n < 0 || k < 0 || n > 100000)
            throw EvalError("binomial expects small non-negative integers");
        if (k > n) return {BigFloat(), BigFloat()};
        BigInt acc(1);
        for (long long j = 0; j < k; ++j) acc = acc * BigInt(n - j) / BigInt(j + 1);
        return {BigFloat(acc).rounded(c.wp), BigFloat()};
    }
    if (e->kids.size() != 1) throw EvalError(f + " expects one argument");
    BigComplex a = ev(e->kids[0], c);
    if (f == "abs") return {cx_abs(a, c.wp), BigFloat()};
    if (f == "factorial") {
        long long n;
        if (!a.is_real() || !integral_value(a.re, n) || n < 0 || n > 20000)
            throw EvalError("factorial expects a small non-negative integer");
        BigInt acc(1);
        for (long long j = 2; j <= n; ++j) acc = acc * BigInt(j);
        return {BigFloat(acc).rounded(c.wp), BigFloat()};
    }
    if (f == "sin") return a.is_real() ? BigComplex{bf_sin(a.re, c.wp), BigFloat()} : cx_sin(a, c.wp);
    if (f == "cos") return a.is_real() ? BigComplex{bf_cos(a.re, c.wp), BigFloat()} : cx_cos(a, c.wp);
    if (f == "tan") {
        BigComplex s = a.is_real() ? BigComplex{bf_sin(a.re, c.wp), BigFloat()} : cx_sin(a, c.wp);
        BigComplex co = a.is_real() ? BigComplex{bf_cos(a.re, c.wp), BigFloat()} : cx_cos(a, c.wp);
        if (co.re.is_zero() && co.im.is_zero()) throw EvalError("tan at a pole");
        return cx_div(s, co, c.wp);
    }
    if (f == "exp") return a.is_real() ? BigComplex{bf_exp(a.re, c.wp), BigFloat()} : cx_exp(a, c.wp);
    if (f == "ln" || f == "log") {
        BigComplex l;
        if (a.is_real() && a.re.sign() > 0) {
            l = {bf_ln(a.re, c.wp), BigFloat()};
        } else {
            if (!c.allow_complex) throw EvalError("log of a non-positive real in real mode");
            if (a.re.is_zero() && a.im.is_zero()) throw EvalError("log of zero");
            l = cx_ln(a, c.wp);
        }
        if (f == "ln") return l;
        BigFloat ln10 = bf_ln10(c.wp);
        return {BigFloat::div(l.re, ln10, c.wp), BigFloat::div(l.im, ln10, c.wp)};
    }
    throw EvalError("unknown function " + f);
}

BigComplex ev(const ExprPtr& e, EvalCtx& c) {
    switch (e->kind) {
        case Kind::Number:
            return {BigFloat::from_rational(e->number, c.wp), BigFloat()};
        case Kind::Constant:
            switch (e->constant) {
                case ConstKind::Pi: return {bf_pi(c.wp), BigFloat()};
                case ConstKind::E: return {bf_exp(BigFloat::from_int(1), c.wp), BigFloat()};
                case ConstKind::I:
                    if (!c.allow_complex) throw EvalError("imaginary unit in real mode");
                    return {BigFloat(), BigFloat::from_int(1)};
            }
            throw EvalError("bad constant");
        case Kind::Variable: {
            auto it = c.asg.find(e->label);
            if (it == c.asg.end()) throw EvalError("unassigned variable " + e->label);
            return {BigFloat::from_rational(it->second, c.wp), BigFloat()};
        }
        case Kind::Neg: {
            BigComplex a = ev(e->kids[0], c);
            return {-a.re, -a.im};
        }
        case Kind::Add: {
            BigComplex acc = ev(e->kids[0], c);
            for (std::size_t i = 1; i < e->kids.size(); ++i)
                acc = cx_add(acc, ev(e->kids[i], c), c.wp);
            return acc;
        }
        case Kind::Sub:
            return cx_sub(ev(e->kids[0], c), ev(e->kids[1], c), c.wp);
        case Kind::Mul: {
            BigComplex acc = ev(e->kids[0], c);
            for (std::size_t i = 1; i < e->kids.size(); ++i)
                acc = cx_mul(acc, ev(e->kids[i], c), c.wp);
            return acc;
        }
        case Kind::Div: {
            BigComplex denom = ev(e->kids[1], c);
            if (denom.re.is_zero() && denom.im.is_zero()) throw EvalError("division by zero");
            return cx_div(ev(e->kids[0], c), denom, c.wp);
        }
        case Kind::Pow:
            return ev_pow(ev(e->kids[0], c), ev(e->kids[1], c), c);
        case Kind::Root: {
            BigComplex order = ev(e->kids[1], c);
            long long n;
            if (!order.is_real() || !integral_value(order.re, n) || n < 1 || n > 64)
                throw EvalError("root order must be a small positive integer");
            BigComplex x = ev(e->kids[0], c);
            BigFloat inv_n = BigFloat::div(BigFloat::from_int(1), BigFloat::from_int(n), c.wp);
            if (x.is_real()) {
                if (x.re.is_zero()) return {BigFloat(), BigFloat()};
                if (x.re.sign() > 0) return {bf_pow(x.re, inv_n, c.wp), BigFloat()};
                if (n % 2 == 1)  // real odd root of a negative number
                    return {-bf_pow(-x.re, inv_n, c.wp), BigFloat()};
                if (!c.allow_complex) throw EvalError("even root of a negative real in real mode");
            }
            return cx_pow(x, BigComplex{inv_n, BigFloat()}, c.wp);
        }
        case Kind::Func:
            return ev_func(e, c);
        case Kind::Text:
        case Kind::Equation:
        case Kind::Interval:
        case Kind::Tuple:
            throw EvalError("not a scalar expression");
    }
    throw EvalError("bad node");
}

}  // namespace

BigComplex eval_numeric(const ExprPtr& e, const Assignment& assignment, int digits,
                        bool allow_complex) {
    if (digits < 1) throw std::invalid_argument("eval_numeric: digits must be positive");
    EvalCtx c{assignment, digits + 10, allow_complex};
    try {
        return ev(e, c);
    } catch (const std::domain_error& ex) {
        throw EvalError(ex.what());
    }
}

}  // namespace matheval::sym
