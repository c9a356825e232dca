#ifndef MATHEVAL_BIGFLOAT_HPP_
#define MATHEVAL_BIGFLOAT_HPP_

#include "matheval/bignum.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace matheval {

// Arbitrary-precision decimal float: value = mantissa * 10^exponent.
// Operations round the result to the requested number of significant
// decimal digits (round half away from zero); precision is passed per call.
class BigFloat {
public:
    BigFloat() = default;
    explicit BigFloat(const BigInt& m, std::int64_t e = 0) : mant_(m), exp_(e) { norm(); }

    static BigFloat from_int(long long v) { return BigFloat(BigInt(v)); }
    static BigFloat from_rational(const Rational& r, int prec);
    static BigFloat parse(std::string_view s);  // exact decimal/scientific; throws
    static BigFloat from_double(double d);

    bool is_zero() const { return mant_.is_zero(); }
    int sign() const { return mant_.sign(); }
    BigFloat operator-() const { return BigFloat(-mant_, exp_); }
    BigFloat abs() const { return BigFloat(mant_.abs(), exp_); }

    // floor(log10(|x|)) + 1, i.e. the power-of-ten magnitude; 0 for zero.
    std::int64_t mag10() const;

    BigFloat rounded(int prec) const;

    static BigFloat add(const BigFloat& a, const BigFloat& b, int prec);
    static BigFloat sub(const BigFloat& a, const BigFloat& b, int prec);
    static BigFloat mul(const BigFloat& a, const BigFloat& b, int prec);
    static BigFloat div(const BigFloat& a, const BigFloat& b, int prec);  // throws on /0

    static int compare(const BigFloat& a, const BigFloat& b);

    double to_double() const;
    std::string to_string() const;  // exact "<mant>e<exp>" debug form

    const BigInt& mantissa() const { return mant_; }
    std::int64_t exponent() const { return exp_; }

private:
    BigInt mant_;
    std::int64_t exp_ = 0;
    void norm();  // strip trailing zero digits of the mantissa
};

BigFloat bf_pi(int prec);
BigFloat bf_ln10(int prec);
BigFloat bf_sqrt(const BigFloat& x, int prec);   // throws on negative
BigFloat bf_exp(const BigFloat& x, int prec);
BigFloat bf_ln(const BigFloat& x, int prec);     // throws on x <= 0
BigFloat bf_sin(const BigFloat& x, int prec);
BigFloat bf_cos(const BigFloat& x, int prec);
BigFloat bf_atan(const BigFloat& x, int prec);
BigFloat bf_atan2(const BigFloat& y, const BigFloat& x, int prec);
BigFloat bf_pow(const BigFloat& base, const BigFloat& e, int prec);  // base > 0

struct BigComplex {
    BigFloat re, im;
    bool is_real() const { return im.is_zero(); }
};

BigComplex cx_add(const BigComplex&, const BigComplex&, int prec);
BigComplex cx_sub(const BigComplex&, const BigComplex&, int prec);
BigComplex cx_mul(const BigComplex&, const BigComplex&, int prec);
BigComplex cx_div(const BigComplex&, const BigComplex&, int prec);  // throws on /0
BigFloat cx_abs(const BigComplex&, int prec);
BigComplex cx_exp(const BigComplex&, int prec);
BigComplex cx_ln(const BigComplex&, int prec);   // principal branch; throws on 0
BigComplex cx_pow(const BigComplex& base, const BigComplex& e, int prec);
BigComplex cx_sin(const BigComplex&, int prec);
BigComplex cx_cos(const BigComplex&, int prec);

}  // namespace matheval

#endif  // MATHEVAL_BIGFLOAT_HPP_
