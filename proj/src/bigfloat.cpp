#include "matheval/bigfloat.hpp"

#include <cstdio>
#include <cstdlib>
#include <map>
#include <mutex>
#include <stdexcept>

namespace matheval {

namespace {
int guard(int prec) { return prec + 12; }
}  // namespace

void BigFloat::norm() {
    if (mant_.is_zero()) {
        exp_ = 0;
        return;
    }
    // strip factors of 10 from the mantissa
    while (true) {
        BigInt q, r;
        BigInt::divmod(mant_, BigInt(10), q, r);
        if (!r.is_zero()) break;
        mant_ = q;
        ++exp_;
    }
}

BigFloat BigFloat::from_rational(const Rational& r, int prec) {
    if (r.is_zero()) return BigFloat();
    if (r.is_integer()) return BigFloat(r.num()).rounded(prec);
    int g = guard(prec);
    std::int64_t shift = static_cast<std::int64_t>(g) +
                         static_cast<std::int64_t>(r.den().digit_count());
    BigInt scaled = r.num() * BigInt::pow10(static_cast<std::size_t>(shift));
    BigInt q, rem;
    BigInt::divmod(scaled, r.den(), q, rem);
    return BigFloat(q, -shift).rounded(prec);
}

BigFloat BigFloat::parse(std::string_view s) {
    std::size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        neg = s[i] == '-';
        ++i;
    }
    std::string digits;
    std::int64_t exp = 0;
    bool dot = false, any = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c >= '0' && c <= '9') {
            digits.push_back(c);
            if (dot) --exp;
            any = true;
        } else if (c == '.' && !dot) {
            dot = true;
        } else if ((c == 'e' || c == 'E') && any) {
            exp += std::atoll(std::string(s.substr(i + 1)).c_str());
            // validate tail
            std::size_t j = i + 1;
            if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
            if (j >= s.size()) throw std::invalid_argument("BigFloat: bad exponent");
            for (; j < s.size(); ++j)
                if (s[j] < '0' || s[j] > '9') throw std::invalid_argument("BigFloat: bad exponent");
            break;
        } else {
            throw std::invalid_argument("BigFloat: bad numeral");
        }
    }
    if (!any) throw std::invalid_argument("BigFloat: bad numeral");
    BigInt m = BigInt::from_string(digits.empty() ? "0" : digits);
    if (neg) m = -m;
    return BigFloat(m, exp);
}

BigFloat BigFloat::from_double(double d) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17e", d);
    return parse(buf);
}

std::int64_t BigFloat::mag10() const {
    if (is_zero()) return 0;
    return static_cast<std::int64_t>(mant_.digit_count()) + exp_;
}

BigFloat BigFloat::rounded(int prec) const {
    if (is_zero()) return *this;
    std::size_t d = mant_.digit_count();
    if (d <= static_cast<std::size_t>(prec)) return *this;
    std::size_t drop = d - static_cast<std::size_t>(prec);
    BigInt scale = BigInt::pow10(drop);
    BigInt q, r;
    BigInt::divmod(mant_, scale, q, r);
    // round half away from zero
    BigInt twice = r.abs() * BigInt(2);
    if (twice >= scale) q = q + BigInt(mant_.sign());
    return BigFloat(q, exp_ + static_cast<std::int64_t>(drop));
}

BigFloat BigFloat::add(const BigFloat& a, const BigFloat& b, int prec) {
    if (a.is_zero()) return b.rounded(prec);
    if (b.is_zero()) return a.rounded(prec);
    // when magnitudes are too far apart the small addend is invisible
    std::int64_t ma = a.mag10(), mb = b.mag10();
    int g = guard(prec);
    if (ma - mb > g + static_cast<std::int64_t>(prec)) return a.rounded(prec);
    if (mb - ma > g + static_cast<std::int64_t>(prec)) return b.rounded(prec);
    std::int64_t e = std::min(a.exp_, b.exp_);
    BigInt am = a.mant_ * BigInt::pow10(static_cast<std::size_t>(a.exp_ - e));
    BigInt bm = b.mant_ * BigInt::pow10(static_cast<std::size_t>(b.exp_ - e));
    return BigFloat(am + bm, e).rounded(prec);
}

BigFloat BigFloat::sub(const BigFloat& a, const BigFloat& b, int prec) {
    return add(a, -b, prec);
}

BigFloat BigFloat::mul(const BigFloat& a, const BigFloat& b, int prec) {
    if (a.is_zero() || b.is_zero()) return BigFloat();
    return BigFloat(a.mant_ * b.mant_, a.exp_ + b.exp_).rounded(prec);
}

BigFloat BigFloat::div(const BigFloat& a, const BigFloat& b, int prec) {
    if (b.is_zero()) throw std::domain_error("BigFloat: division by zero");
    if (a.is_zero()) return BigFloat();
    int g = guard(prec);
    std::int64_t shift = static_cast<std::int64_t>(g) + prec +
                         static_cast<std::int64_t>(b.mant_.digit_count());
    BigInt scaled = a.mant_ * BigInt::pow10(static_cast<std::size_t>(shift));
    BigInt q, r;
    BigInt::divmod(scaled, b.mant_, q, r);
    return BigFloat(q, a.exp_ - b.exp_ - shift).rounded(prec);
}

int BigFloat::compare(const BigFloat& a, const BigFloat& b) {
    if (a.sign() != b.sign()) return a.sign() < b.sign() ? -1 : 1;
    if (a.is_zero()) return 0;
    std::int64_t e = std::min(a.exp_, b.exp_);
    BigInt am = a.mant_ * BigInt::pow10(static_cast<std::size_t>(a.exp_ - e));
    BigInt bm = b.mant_ * BigInt::pow10(static_cast<std::size_t>(b.exp_ - e));
    return BigInt::compare(am, bm);
}

double BigFloat::to_double() const {
    std::string s = mant_.to_string() + "e" + std::to_string(exp_);
    return std::strtod(s.c_str(), nullptr);
}

std::string BigFloat::to_string() const {
    return mant_.to_string() + "e" + std::to_string(exp_);
}

// ---- transcendentals ----

namespace {

BigFloat int_bf(long long v) { return BigFloat::from_int(v); }

// atan(1/x) for integer x >= 2, Taylor series
BigFloat atan_inv(long long x, int prec) {
    int wp = guard(prec);
    BigFloat inv_x2 = BigFloat::div(int_bf(1), int_bf(x * x), wp);
    BigFloat term = BigFloat::div(int_bf(1), int_bf(x), wp);
    BigFloat sum = term;
    long long k = 1;
    while (!term.is_zero() && term.mag10() > sum.mag10() - wp - 2) {
        term = BigFloat::mul(term, inv_x2, wp);
        BigFloat t = BigFloat::div(term, int_bf(2 * k + 1), wp);
        sum = (k % 2 == 1) ? BigFloat::sub(sum, t, wp) : BigFloat::add(sum, t, wp);
        ++k;
    }
    return sum;
}

std::mutex g_const_mu;
std::map<int, BigFloat> g_pi_cache;
std::map<int, BigFloat> g_ln10_cache;

}  // namespace

BigFloat bf_pi(int prec) {
    {
        std::lock_guard<std::mutex> lk(g_const_mu);
        auto it = g_pi_cache.find(prec);
        if (it != g_pi_cache.end()) return it->second;
    }
    int wp = guard(prec) + 8;
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
    BigFloat v = BigFloat::sub(BigFloat::mul(int_bf(16), atan_inv(5, wp), wp),
                               BigFloat::mul(int_bf(4), atan_inv(239, wp), wp), wp)
                     .rounded(prec + 4);
    std::lock_guard<std::mutex> lk(g_const_mu);
    g_pi_cache[prec] = v;
    return v;
}

BigFloat bf_sqrt(const BigFloat& x, int prec) {
    if (x.sign() < 0) throw std::domain_error("sqrt: negative argument");
    if (x.is_zero()) return BigFloat();
    int wp = guard(prec);
    // scale mantissa to ~2*wp digits with an even combined exponent
    BigInt m = x.mantissa();
    std::int64_t e = x.exponent();
    std::int64_t want = 2 * static_cast<std::int64_t>(wp);
    std::int64_t k = want - static_cast<std::int64_t>(m.digit_count());
    if (k < 0) k = 0;
    if ((e - k) % 2 != 0) ++k;
    m = m * BigInt::pow10(static_cast<std::size_t>(k));
    BigInt s = BigInt::iroot(m, 2);
    return BigFloat(s, (e - k) / 2).rounded(prec);
}

BigFloat bf_ln10(int prec) {
    {
        std::lock_guard<std::mutex> lk(g_const_mu);
        auto it = g_ln10_cache.find(prec);
        if (it != g_ln10_cache.end()) return it->second;
    }
    int wp = guard(prec) + 10;
    // ln(10) = 2^j * 2*atanh((y-1)/(y+1)) with y = 10^(1/2^j)
    BigFloat y = int_bf(10);
    int j = 0;
    for (; j < 14; ++j) y = bf_sqrt(y, wp);
    BigFloat t = BigFloat::div(BigFloat::sub(y, int_bf(1), wp),
                               BigFloat::add(y, int_bf(1), wp), wp);
    BigFloat t2 = BigFloat::mul(t, t, wp);
    BigFloat term = t, sum = t;
    long long k = 1;
    while (!term.is_zero() && term.mag10() > sum.mag10() - wp - 2) {
        term = BigFloat::mul(term, t2, wp);
        sum = BigFloat::add(sum, BigFloat::div(term, int_bf(2 * k + 1), wp), wp);
        ++k;
    }
    BigFloat v = BigFloat::mul(sum, BigFloat(BigInt(2).pow(j + 1)), wp).rounded(prec + 4);
    std::lock_guard<std::mutex> lk(g_const_mu);
    g_ln10_cache[prec] = v;
    return v;
}

BigFloat bf_ln(const BigFloat& x, int prec) {
    if (x.sign() <= 0) throw std::domain_error("ln: non-positive argument");
    int wp = guard(prec) + 6;
    // x = m * 10^e with m in [1, 10); pull the decade count out
    std::int64_t dec = x.mag10() - 1;
    BigFloat m(x.mantissa(), x.exponent() - dec);  // in [1, 10)
    // reduce m toward 1 by square roots
    int j = 0;
    BigFloat lo = BigFloat::parse("0.999");
    BigFloat hi = BigFloat::parse("1.001");
    while ((BigFloat::compare(m, hi) > 0 || BigFloat::compare(m, lo) < 0) && j < 40) {
        m = bf_sqrt(m, wp);
        ++j;
    }
    BigFloat t = BigFloat::div(BigFloat::sub(m, int_bf(1), wp),
                               BigFloat::add(m, int_bf(1), wp), wp);
    BigFloat t2 = BigFloat::mul(t, t, wp);
    BigFloat term = t, sum = t;
    long long k = 1;
    while (!term.is_zero() && term.mag10() > sum.mag10() - wp - 2) {
        term = BigFloat::mul(term, t2, wp);
        sum = BigFloat::add(sum, BigFloat::div(term, int_bf(2 * k + 1), wp), wp);
        ++k;
    }
    BigFloat ln_m = BigFloat::mul(sum, BigFloat(BigInt(2).pow(j + 1)), wp);
    if (dec == 0) return ln_m.rounded(prec);
    BigFloat dec_part = BigFloat::mul(int_bf(dec), bf_ln10(wp), wp);
    return BigFloat::add(ln_m, dec_part, wp).rounded(prec);
}

BigFloat bf_exp(const BigFloat& x, int prec) {
    if (x.is_zero()) return int_bf(1);
    int wp = guard(prec) + 8;
    if (x.mag10() > 9) throw std::domain_error("exp: argument too large");
    // pull out powers of ten: x = n*ln10 + r, |r| <= ln10/2
    BigFloat ln10 = bf_ln10(wp);
    BigFloat n_f = BigFloat::div(x, ln10, wp);
    // round n_f to nearest integer
    double nd = n_f.to_double();
    long long n = static_cast<long long>(nd >= 0 ? nd + 0.5 : nd - 0.5);
    BigFloat r = BigFloat::sub(x, BigFloat::mul(int_bf(n), ln10, wp), wp);
    // halve r until small, then Taylor, then square back
    int j = 0;
    BigFloat limit = BigFloat::parse("0.01");
    while (BigFloat::compare(r.abs(), limit) > 0 && j < 60) {
        r = BigFloat::div(r, int_bf(2), wp);
        ++j;
    }
    BigFloat term = int_bf(1), sum = int_bf(1);
    long long k = 1;
    while (!term.is_zero() && term.mag10() > -(wp + 4)) {
        term = BigFloat::div(BigFloat::mul(term, r, wp), int_bf(k), wp);
        sum = BigFloat::add(sum, term, wp);
        ++k;
    }
    for (int i = 0; i < j; ++i) sum = BigFloat::mul(sum, sum, wp);
    return BigFloat(sum.mantissa(), sum.exponent() + n).rounded(prec);
}

namespace {

// sin on |r| <= pi/2 by Taylor series
BigFloat sin_taylor(const BigFloat& r, int wp) {
    BigFloat r2 = BigFloat::mul(r, r, wp);
    BigFloat term = r, sum = r;
    long long k = 1;
    while (!term.is_zero() && term.mag10() > -(wp + 4)) {
        term = BigFloat::div(BigFloat::mul(term, r2, wp), int_bf((2 * k) * (2 * k + 1)), wp);
        sum = (k % 2 == 1) ? BigFloat::sub(sum, term, wp) : BigFloat::add(sum, term, wp);
        ++k;
    }
    return sum;
}

}  // namespace

BigFloat bf_sin(const BigFloat& x, int prec) {
    int wp = guard(prec) + 8;
    BigFloat pi = bf_pi(wp);
    BigFloat two_pi = BigFloat::mul(int_bf(2), pi, wp);
    // r = x mod 2pi in [-pi, pi]
    BigFloat q = BigFloat::div(x, two_pi, wp);
    double qd = q.to_double();
    long long n = static_cast<long long>(qd >= 0 ? qd + 0.5 : qd - 0.5);
    BigFloat r = BigFloat::sub(x, BigFloat::mul(int_bf(n), two_pi, wp), wp);
    BigFloat half_pi = BigFloat::div(pi, int_bf(2), wp);
    if (BigFloat::compare(r, half_pi) > 0) r = BigFloat::sub(pi, r, wp);
    else if (BigFloat::compare(r, -half_pi) < 0) r = BigFloat::sub(-pi, r, wp);
    return sin_taylor(r, wp).rounded(prec);
}

BigFloat bf_cos(const BigFloat& x, int prec) {
    int wp = guard(prec) + 8;
    BigFloat half_pi = BigFloat::div(bf_pi(wp), int_bf(2), wp);
    return bf_sin(BigFloat::sub(half_pi, x, wp), prec);
}

BigFloat bf_atan(const BigFloat& x, int prec) {
    if (x.is_zero()) return BigFloat();
    int wp = guard(prec) + 8;
    if (x.sign() < 0) return -bf_atan(-x, prec);
    if (BigFloat::compare(x, int_bf(1)) > 0) {
        BigFloat half_pi = BigFloat::div(bf_pi(wp), int_bf(2), wp);
        BigFloat inner = bf_atan(BigFloat::div(int_bf(1), x, wp), wp);
        return BigFloat::sub(half_pi, inner, wp).rounded(prec);
    }
    // angle halving: t <- t / (1 + sqrt(1 + t^2)) until small
    BigFloat t = x;
    int j = 0;
    BigFloat limit = BigFloat::parse("0.05");
    while (BigFloat::compare(t.abs(), limit) > 0 && j < 40) {
        BigFloat t2 = BigFloat::mul(t, t, wp);
        BigFloat root = bf_sqrt(BigFloat::add(int_bf(1), t2, wp), wp);
        t = BigFloat::div(t, BigFloat::add(int_bf(1), root, wp), wp);
        ++j;
    }
    BigFloat t2 = BigFloat::mul(t, t, wp);
    BigFloat term = t, sum = t;
    long long k = 1;
    while (!term.is_zero() && term.mag10() > sum.mag10() - wp - 2) {
        term = BigFloat::mul(term, t2, wp);
        BigFloat d = BigFloat::div(term, int_bf(2 * k + 1), wp);
        sum = (k % 2 == 1) ? BigFloat::sub(sum, d, wp) : BigFloat::add(sum, d, wp);
        ++k;
    }
    return BigFloat::mul(sum, BigFloat(BigInt(2).pow(j)), wp).rounded(prec);
}

BigFloat bf_atan2(const BigFloat& y, const BigFloat& x, int prec) {
    int wp = guard(prec) + 4;
    if (x.is_zero() && y.is_zero()) throw std::domain_error("atan2(0,0)");
    if (x.is_zero()) {
        BigFloat half_pi = BigFloat::div(bf_pi(wp), int_bf(2), wp);
        return (y.sign() > 0 ? half_pi : -half_pi).rounded(prec);
    }
    BigFloat base = bf_atan(BigFloat::div(y, x, wp), wp);
    if (x.sign() > 0) return base.rounded(prec);
    BigFloat pi = bf_pi(wp);
    if (y.sign() >= 0) return BigFloat::add(base, pi, wp).rounded(prec);
    return BigFloat::sub(base, pi, wp).rounded(prec);
}

BigFloat bf_pow(const BigFloat& base, const BigFloat& e, int prec) {
    if (base.sign() <= 0) throw std::domain_error("pow: non-positive base");
    int wp = guard(prec) + 4;
    return bf_exp(BigFloat::mul(e, bf_ln(base, wp), wp), prec);
}

// ---- complex ----

BigComplex cx_add(const BigComplex& a, const BigComplex& b, int prec) {
    return {BigFloat::add(a.re, b.re, prec), BigFloat::add(a.im, b.im, prec)};
}

BigComplex cx_sub(const BigComplex& a, const BigComplex& b, int prec) {
    return {BigFloat::sub(a.re, b.re, prec), BigFloat::sub(a.im, b.im, prec)};
}

BigComplex cx_mul(const BigComplex& a, const BigComplex& b, int prec) {
    int wp = guard(prec);
    BigFloat re = BigFloat::sub(BigFloat::mul(a.re, b.re, wp), BigFloat::mul(a.im, b.im, wp), prec);
    BigFloat im = BigFloat::add(BigFloat::mul(a.re, b.im, wp), BigFloat::mul(a.im, b.re, wp), prec);
    return {re, im};
}

BigComplex cx_div(const BigComplex& a, const BigComplex& b, int prec) {
    int wp = guard(prec);
    BigFloat denom = BigFloat::add(BigFloat::mul(b.re, b.re, wp),
                                   BigFloat::mul(b.im, b.im, wp), wp);
    if (denom.is_zero()) throw std::domain_error("complex division by zero");
    BigFloat re = BigFloat::add(BigFloat::mul(a.re, b.re, wp), BigFloat::mul(a.im, b.im, wp), wp);
    BigFloat im = BigFloat::sub(BigFloat::mul(a.im, b.re, wp), BigFloat::mul(a.re, b.im, wp), wp);
    return {BigFloat::div(re, denom, prec), BigFloat::div(im, denom, prec)};
}

BigFloat cx_abs(const BigComplex& z, int prec) {
    if (z.im.is_zero()) return z.re.abs().rounded(prec);
    if (z.re.is_zero()) return z.im.abs().rounded(prec);
    int wp = guard(prec);
    return bf_sqrt(BigFloat::add(BigFloat::mul(z.re, z.re, wp),
                                 BigFloat::mul(z.im, z.im, wp), wp), prec);
}

BigComplex cx_exp(const BigComplex& z, int prec) {
    int wp = guard(prec);
    BigFloat mag = bf_exp(z.re, wp);
    if (z.im.is_zero()) return {mag.rounded(prec), BigFloat()};
    return {BigFloat::mul(mag, bf_cos(z.im, wp), prec),
            BigFloat::mul(mag, bf_sin(z.im, wp), prec)};
}

BigComplex cx_ln(const BigComplex& z, int prec) {
    int wp = guard(prec);
    if (z.re.is_zero() && z.im.is_zero()) throw std::domain_error("ln(0)");
    BigFloat mod = cx_abs(z, wp);
    BigFloat arg = z.im.is_zero()
                       ? (z.re.sign() > 0 ? BigFloat() : bf_pi(wp))
                       : bf_atan2(z.im, z.re, wp);
    return {bf_ln(mod, prec), arg.rounded(prec)};
}

BigComplex cx_pow(const BigComplex& base, const BigComplex& e, int prec) {
    int wp = guard(prec);
    return cx_exp(cx_mul(cx_ln(base, wp), e, wp), prec);
}

BigComplex cx_sin(const BigComplex& z, int prec) {
    if (z.im.is_zero()) return {bf_sin(z.re, prec), BigFloat()};
    int wp = guard(prec);
    BigComplex iz{-z.im, z.re};
    BigComplex niz{z.im, -z.re};
    BigComplex diff = cx_sub(cx_exp(iz, wp), cx_exp(niz, wp), wp);
    return cx_div(diff, BigComplex{BigFloat(), int_bf(2)}, prec);
}

BigComplex cx_cos(const BigComplex& z, int prec) {
    if (z.im.is_zero()) return {bf_cos(z.re, prec), BigFloat()};
    int wp = guard(prec);
    BigComplex iz{-z.im, z.re};
    BigComplex niz{z.im, -z.re};
    BigComplex sum = cx_add(cx_exp(iz, wp), cx_exp(niz, wp), wp);
    return cx_div(sum, BigComplex{int_bf(2), BigFloat()}, prec);
}

}  // namespace matheval
