#ifndef MATHEVAL_BIGNUM_HPP_
#define MATHEVAL_BIGNUM_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace matheval {

// Arbitrary-precision signed integer, sign-magnitude over base-1e9 limbs.
class BigInt {
public:
    BigInt() = default;
    BigInt(long long v);

    static BigInt from_string(std::string_view s);  // throws std::invalid_argument
    static BigInt pow10(std::size_t n);

    bool is_zero() const { return sign_ == 0; }
    bool is_negative() const { return sign_ < 0; }
    int sign() const { return sign_; }

    BigInt operator-() const;
    BigInt abs() const;

    friend BigInt operator+(const BigInt& a, const BigInt& b);
    friend BigInt operator-(const BigInt& a, const BigInt& b);
    friend BigInt operator*(const BigInt& a, const BigInt& b);
    friend BigInt operator/(const BigInt& a, const BigInt& b);  // truncated
    friend BigInt operator%(const BigInt& a, const BigInt& b);

    // Truncated division: quotient rounds toward zero, remainder has the
    // dividend's sign.
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);

    static int compare(const BigInt& a, const BigInt& b);
    friend bool operator==(const BigInt& a, const BigInt& b) { return compare(a, b) == 0; }
    friend bool operator!=(const BigInt& a, const BigInt& b) { return compare(a, b) != 0; }
    friend bool operator<(const BigInt& a, const BigInt& b) { return compare(a, b) < 0; }
    friend bool operator<=(const BigInt& a, const BigInt& b) { return compare(a, b) <= 0; }
    friend bool operator>(const BigInt& a, const BigInt& b) { return compare(a, b) > 0; }
    friend bool operator>=(const BigInt& a, const BigInt& b) { return compare(a, b) >= 0; }

    static BigInt gcd(BigInt a, BigInt b);
    BigInt pow(std::uint64_t e) const;

    // Largest r with r^n <= |x|; x must be non-negative.
    static BigInt iroot(const BigInt& x, unsigned n);

    std::size_t digit_count() const;  // decimal digits of |x|; 1 for zero
    bool fits_int64() const;
    std::int64_t to_int64() const;  // throws std::overflow_error
    double to_double() const;

    std::string to_string() const;

private:
    int sign_ = 0;
    std::vector<std::uint32_t> limbs_;  // little-endian, base 1e9, no leading zeros

    static constexpr std::uint32_t kBase = 1000000000u;
    void trim();
    static std::vector<std::uint32_t> add_mag(const std::vector<std::uint32_t>&,
                                              const std::vector<std::uint32_t>&);
    static std::vector<std::uint32_t> sub_mag(const std::vector<std::uint32_t>&,
                                              const std::vector<std::uint32_t>&);
    static int cmp_mag(const std::vector<std::uint32_t>&, const std::vector<std::uint32_t>&);
    friend class BigFloat;
};

// Exact rational; denominator > 0, always reduced.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long v) : num_(v), den_(1) {}
    Rational(BigInt n, BigInt d);  // throws std::domain_error on zero denominator

    static Rational from_decimal_string(std::string_view s);  // "3.25", "-2", ".5"; throws

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_negative() const { return num_.is_negative(); }
    bool is_integer() const;
    bool is_one() const;

    Rational operator-() const;
    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);  // throws on zero divisor

    Rational reciprocal() const;
    Rational pow(long long e) const;  // throws on 0^negative

    static int compare(const Rational& a, const Rational& b);
    friend bool operator==(const Rational& a, const Rational& b) { return compare(a, b) == 0; }
    friend bool operator!=(const Rational& a, const Rational& b) { return compare(a, b) != 0; }
    friend bool operator<(const Rational& a, const Rational& b) { return compare(a, b) < 0; }

    double to_double() const;
    std::string to_string() const;  // "p" or "p/q"

private:
    BigInt num_, den_;
    void reduce();
};

}  // namespace matheval

#endif  // MATHEVAL_BIGNUM_HPP_
