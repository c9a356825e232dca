#include "matheval/bignum.hpp"

#include <algorithm>
#include <cstdlib>

namespace matheval {

namespace {
constexpr std::uint32_t kBase = 1000000000u;
constexpr int kBaseDigits = 9;
}  // namespace

BigInt::BigInt(long long v) {
    if (v == 0) return;
    sign_ = v > 0 ? 1 : -1;
    unsigned long long m = v > 0 ? static_cast<unsigned long long>(v)
                                 : 0ULL - static_cast<unsigned long long>(v);
    while (m) {
        limbs_.push_back(static_cast<std::uint32_t>(m % kBase));
        m /= kBase;
    }
}

void BigInt::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
    if (limbs_.empty()) sign_ = 0;
}

BigInt BigInt::from_string(std::string_view s) {
    std::size_t i = 0;
    int sign = 1;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        if (s[i] == '-') sign = -1;
        ++i;
    }
    if (i == s.size()) throw std::invalid_argument("BigInt: empty numeral");
    for (std::size_t j = i; j < s.size(); ++j)
        if (s[j] < '0' || s[j] > '9') throw std::invalid_argument("BigInt: bad digit");
    BigInt out;
    std::size_t n = s.size();
    for (std::size_t end = n; end > i;) {
        std::size_t start = end >= i + kBaseDigits ? end - kBaseDigits : i;
        std::uint32_t limb = 0;
        for (std::size_t j = start; j < end; ++j) limb = limb * 10 + static_cast<std::uint32_t>(s[j] - '0');
        out.limbs_.push_back(limb);
        end = start;
    }
    out.sign_ = sign;
    out.trim();
    return out;
}

BigInt BigInt::pow10(std::size_t n) {
    BigInt out;
    out.sign_ = 1;
    out.limbs_.assign(n / kBaseDigits, 0);
    std::uint32_t top = 1;
    for (std::size_t i = 0; i < n % kBaseDigits; ++i) top *= 10;
    out.limbs_.push_back(top);
    out.trim();
    return out;
}

BigInt BigInt::operator-() const {
    BigInt out = *this;
    out.sign_ = -out.sign_;
    return out;
}

BigInt BigInt::abs() const {
    BigInt out = *this;
    if (out.sign_ < 0) out.sign_ = 1;
    return out;
}

int BigInt::cmp_mag(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
}

std::vector<std::uint32_t> BigInt::add_mag(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> out(std::max(a.size(), b.size()) + 1, 0);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint64_t s = carry;
        if (i < a.size()) s += a[i];
        if (i < b.size()) s += b[i];
        out[i] = static_cast<std::uint32_t>(s % kBase);
        carry = s / kBase;
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

std::vector<std::uint32_t> BigInt::sub_mag(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b) {
    // requires |a| >= |b|
    std::vector<std::uint32_t> out(a.size(), 0);
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::int64_t d = static_cast<std::int64_t>(a[i]) - borrow - (i < b.size() ? b[i] : 0);
        if (d < 0) {
            d += kBase;
            borrow = 1;
        } else {
            borrow = 0;
        }
        out[i] = static_cast<std::uint32_t>(d);
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

BigInt operator+(const BigInt& a, const BigInt& b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    BigInt out;
    if (a.sign_ == b.sign_) {
        out.limbs_ = BigInt::add_mag(a.limbs_, b.limbs_);
        out.sign_ = a.sign_;
    } else {
        int c = BigInt::cmp_mag(a.limbs_, b.limbs_);
        if (c == 0) return BigInt();
        if (c > 0) {
            out.limbs_ = BigInt::sub_mag(a.limbs_, b.limbs_);
            out.sign_ = a.sign_;
        } else {
            out.limbs_ = BigInt::sub_mag(b.limbs_, a.limbs_);
            out.sign_ = b.sign_;
        }
    }
    out.trim();
    return out;
}

BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

BigInt operator*(const BigInt& a, const BigInt& b) {
    if (a.sign_ == 0 || b.sign_ == 0) return BigInt();
    std::vector<std::uint64_t> acc(a.limbs_.size() + b.limbs_.size(), 0);
    for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
        std::uint64_t carry = 0;
        for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
            std::uint64_t cur = acc[i + j] + carry +
                                static_cast<std::uint64_t>(a.limbs_[i]) * b.limbs_[j];
            acc[i + j] = cur % kBase;
            carry = cur / kBase;
        }
        std::size_t k = i + b.limbs_.size();
        while (carry) {
            std::uint64_t cur = acc[k] + carry;
            acc[k] = cur % kBase;
            carry = cur / kBase;
            ++k;
        }
    }
    BigInt out;
    out.limbs_.assign(acc.begin(), acc.end());
    out.sign_ = a.sign_ * b.sign_;
    out.trim();
    return out;
}

void BigInt::divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    if (b.sign_ == 0) throw std::domain_error("BigInt: division by zero");
    if (cmp_mag(a.limbs_, b.limbs_) < 0) {
        q = BigInt();
        r = a;
        return;
    }
    if (b.limbs_.size() == 1) {
        // fast single-limb path
        std::uint32_t d = b.limbs_[0];
        std::vector<std::uint32_t> ql(a.limbs_.size(), 0);
        std::uint64_t rem = 0;
        for (std::size_t i = a.limbs_.size(); i-- > 0;) {
            std::uint64_t cur = rem * kBase + a.limbs_[i];
            ql[i] = static_cast<std::uint32_t>(cur / d);
            rem = cur % d;
        }
        q = BigInt();
        q.limbs_ = std::move(ql);
        q.sign_ = a.sign_ * b.sign_;
        q.trim();
        r = BigInt(static_cast<long long>(rem));
        if (a.sign_ < 0) r.sign_ = -r.sign_;
        r.trim();
        return;
    }
    // Knuth algorithm D over base 1e9, normalized so the divisor's top limb
    // is >= kBase/2.
    std::uint32_t norm = static_cast<std::uint32_t>(
        (static_cast<std::uint64_t>(kBase) / 2 + b.limbs_.back() - 1) / b.limbs_.back());
    if (norm == 0) norm = 1;
    BigInt u = a.abs() * BigInt(static_cast<long long>(norm));
    BigInt v = b.abs() * BigInt(static_cast<long long>(norm));
    std::size_t n = v.limbs_.size();
    std::size_t m = u.limbs_.size() - n;
    u.limbs_.push_back(0);
    std::vector<std::uint32_t> ql(m + 1, 0);
    const std::uint64_t vtop = v.limbs_[n - 1];
    const std::uint64_t vsec = v.limbs_[n - 2];
    for (std::size_t j = m + 1; j-- > 0;) {
        std::uint64_t num = static_cast<std::uint64_t>(u.limbs_[j + n]) * kBase + u.limbs_[j + n - 1];
        std::uint64_t qhat = num / vtop;
        std::uint64_t rhat = num % vtop;
        while (qhat >= kBase ||
               qhat * vsec > rhat * kBase + u.limbs_[j + n - 2]) {
            --qhat;
            rhat += vtop;
            if (rhat >= kBase) break;
        }
        // multiply-subtract
        std::int64_t borrow = 0;
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t p = qhat * v.limbs_[i] + carry;
            carry = p / kBase;
            std::int64_t sub = static_cast<std::int64_t>(u.limbs_[i + j]) -
                               static_cast<std::int64_t>(p % kBase) - borrow;
            if (sub < 0) {
                sub += kBase;
                borrow = 1;
            } else {
                borrow = 0;
            }
            u.limbs_[i + j] = static_cast<std::uint32_t>(sub);
        }
        std::int64_t top = static_cast<std::int64_t>(u.limbs_[j + n]) -
                           static_cast<std::int64_t>(carry) - borrow;
        if (top < 0) {
            // qhat was one too large: add back
            --qhat;
            std::uint64_t c2 = 0;
            for (std::size_t i = 0; i < n; ++i) {
                std::uint64_t s = static_cast<std::uint64_t>(u.limbs_[i + j]) + v.limbs_[i] + c2;
                u.limbs_[i + j] = static_cast<std::uint32_t>(s % kBase);
                c2 = s / kBase;
            }
            top += static_cast<std::int64_t>(c2);
        }
        u.limbs_[j + n] = static_cast<std::uint32_t>(top);
        ql[j] = static_cast<std::uint32_t>(qhat);
    }
    q = BigInt();
    q.limbs_ = std::move(ql);
    q.sign_ = 1;
    q.trim();
    u.limbs_.resize(n);
    u.sign_ = u.limbs_.empty() ? 0 : 1;
    u.trim();
    // undo normalization of the remainder
    BigInt rem, dummy;
    if (norm > 1) {
        BigInt::divmod(u, BigInt(static_cast<long long>(norm)), rem, dummy);
    } else {
        rem = u;
    }
    if (a.sign_ * b.sign_ < 0) q.sign_ = -q.sign_;
    q.trim();
    if (a.sign_ < 0) rem.sign_ = -rem.sign_;
    rem.trim();
    r = rem;
}

BigInt operator/(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    return q;
}

BigInt operator%(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    return r;
}

int BigInt::compare(const BigInt& a, const BigInt& b) {
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_ ? -1 : 1;
    int c = cmp_mag(a.limbs_, b.limbs_);
    return a.sign_ >= 0 ? c : -c;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
    a = a.abs();
    b = b.abs();
    while (!b.is_zero()) {
        BigInt q, r;
        divmod(a, b, q, r);
        a = b;
        b = r;
    }
    if (a.is_zero()) return BigInt(1);
    return a;
}

BigInt BigInt::pow(std::uint64_t e) const {
    BigInt base = *this, acc(1);
    while (e) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

BigInt BigInt::iroot(const BigInt& x, unsigned n) {
    if (x.is_negative()) throw std::domain_error("BigInt::iroot: negative radicand");
    if (x.is_zero() || n == 1) return x;
    // initial guess from digit count: 10^ceil(digits/n)
    BigInt r = pow10(x.digit_count() / n + 1);
    while (true) {
        // Newton: r' = ((n-1)r + x / r^(n-1)) / n
        BigInt rp = r.pow(n - 1);
        BigInt next = (BigInt(static_cast<long long>(n - 1)) * r + x / rp) /
                      BigInt(static_cast<long long>(n));
        if (compare(next, r) >= 0) break;
        r = next;
    }
    while (r.pow(n) > x) r = r - BigInt(1);
    return r;
}

std::size_t BigInt::digit_count() const {
    if (sign_ == 0) return 1;
    std::size_t d = (limbs_.size() - 1) * kBaseDigits;
    std::uint32_t top = limbs_.back();
    while (top) {
        ++d;
        top /= 10;
    }
    return d;
}

bool BigInt::fits_int64() const {
    static const BigInt kMin = BigInt::from_string("-9223372036854775808");
    static const BigInt kMax = BigInt::from_string("9223372036854775807");
    return compare(*this, kMin) >= 0 && compare(*this, kMax) <= 0;
}

std::int64_t BigInt::to_int64() const {
    if (!fits_int64()) throw std::overflow_error("BigInt: does not fit int64");
    std::int64_t out = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) out = out * kBase + limbs_[i];
    return sign_ < 0 ? -out : out;
}

double BigInt::to_double() const {
    // round-trip through decimal text for correctly rounded conversion
    return std::strtod(to_string().c_str(), nullptr);
}

std::string BigInt::to_string() const {
    if (sign_ == 0) return "0";
    std::string out;
    if (sign_ < 0) out.push_back('-');
    char buf[16];
    std::snprintf(buf, sizeof buf, "%u", limbs_.back());
    out += buf;
    for (std::size_t i = limbs_.size() - 1; i-- > 0;) {
        std::snprintf(buf, sizeof buf, "%09u", limbs_[i]);
        out += buf;
    }
    return out;
}

// ---- Rational ----

Rational::Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
    reduce();
}

void Rational::reduce() {
    if (den_.is_negative()) {
        num_ = -num_;
        den_ = -den_;
    }
    if (num_.is_zero()) {
        den_ = BigInt(1);
        return;
    }
    BigInt g = BigInt::gcd(num_, den_);
    if (g != BigInt(1)) {
        num_ = num_ / g;
        den_ = den_ / g;
    }
}

Rational Rational::from_decimal_string(std::string_view s) {
    std::size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        neg = s[i] == '-';
        ++i;
    }
    std::string digits;
    std::size_t frac_digits = 0;
    bool seen_dot = false, seen_digit = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c == '.') {
            if (seen_dot) throw std::invalid_argument("Rational: bad decimal");
            seen_dot = true;
        } else if (c >= '0' && c <= '9') {
            digits.push_back(c);
            seen_digit = true;
            if (seen_dot) ++frac_digits;
        } else {
            throw std::invalid_argument("Rational: bad decimal");
        }
    }
    if (!seen_digit) throw std::invalid_argument("Rational: bad decimal");
    BigInt n = BigInt::from_string(digits.empty() ? "0" : digits);
    if (neg) n = -n;
    return Rational(n, BigInt::pow10(frac_digits));
}

bool Rational::is_integer() const { return den_ == BigInt(1); }

bool Rational::is_one() const { return num_ == BigInt(1) && den_ == BigInt(1); }

Rational Rational::operator-() const {
    Rational out = *this;
    out.num_ = -out.num_;
    return out;
}

Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("Rational: division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

Rational Rational::reciprocal() const {
    if (is_zero()) throw std::domain_error("Rational: reciprocal of zero");
    return Rational(den_, num_);
}

Rational Rational::pow(long long e) const {
    if (e == 0) return Rational(1);
    if (e < 0) return reciprocal().pow(-e);
    return Rational(num_.pow(static_cast<std::uint64_t>(e)),
                    den_.pow(static_cast<std::uint64_t>(e)));
}

int Rational::compare(const Rational& a, const Rational& b) {
    return BigInt::compare(a.num_ * b.den_, b.num_ * a.den_);
}

double Rational::to_double() const {
    if (num_.fits_int64() && den_.fits_int64())
        return static_cast<double>(num_.to_int64()) / static_cast<double>(den_.to_int64());
    return num_.to_double() / den_.to_double();
}

std::string Rational::to_string() const {
    if (is_integer()) return num_.to_string();
    return num_.to_string() + "/" + den_.to_string();
}

}  // namespace matheval
