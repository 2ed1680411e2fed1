#pragma once

#include <gmpxx.h>

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace muderiv {

constexpr long kValInf = std::numeric_limits<long>::max();
constexpr long kDefaultPrecision = 40;

// Element of Q_p held as p^val * unit with `prec` significant digits.
// val == kValInf is the exact zero. prec == 0 with finite val is O(p^val),
// a zero known only to absolute precision val.
class PadicNum {
public:
    PadicNum() = default;
    PadicNum(long p, long prec);  // exact zero

    static PadicNum from_integer(long p, const mpz_class& n, long prec = kDefaultPrecision);
    static PadicNum from_rational(long p, const mpq_class& q, long prec = kDefaultPrecision);
    // unit part given modulo p^prec, multiplied by p^val; unit need not be reduced
    static PadicNum from_parts(long p, long val, const mpz_class& unit, long prec);
    // value known to absolute precision abs_prec (x mod p^abs_prec)
    static PadicNum from_integer_abs(long p, const mpz_class& n, long abs_prec);

    long p() const { return p_; }
    long val() const { return val_; }
    long prec() const { return prec_; }
    const mpz_class& unit() const { return unit_; }
    bool is_exact_zero() const { return val_ == kValInf; }
    bool is_zero() const { return val_ == kValInf || prec_ == 0; }
    // absolute precision: digits known below p^abs_prec
    long abs_prec() const { return val_ == kValInf ? kValInf : val_ + prec_; }
    // base-p digits of the unit part, least significant first
    std::vector<long> digits() const;

    PadicNum operator-() const;
    PadicNum operator+(const PadicNum& o) const;
    PadicNum operator-(const PadicNum& o) const;
    PadicNum operator*(const PadicNum& o) const;
    PadicNum operator/(const PadicNum& o) const;
    PadicNum pow(const mpz_class& e) const;
    PadicNum pow(long e) const { return pow(mpz_class(e)); }
    // multiply by p^k (exact)
    PadicNum shift(long k) const;

    // agreement to the common absolute precision
    bool congruent(const PadicNum& o) const;
    // integer representative of the value when val >= 0
    mpz_class to_integer() const;
    std::string str() const;

private:
    long p_ = 0;
    long val_ = kValInf;
    long prec_ = 0;
    mpz_class unit_ = 0;

    void normalise();
};

mpz_class ipow(long p, long e);
long vp_integer(const mpz_class& n, long p);  // n != 0
long vp_rational(const mpq_class& q, long p); // q != 0

long val_p(const PadicNum& x);

// Iwasawa logarithm: log_p(p) = 0, log_p(root of unity) = 0.
PadicNum iwasawa_log(const PadicNum& x);
PadicNum iwasawa_log_rational(long p, const mpq_class& q, long prec = kDefaultPrecision);

// Teichmuller lift of a (p-adic unit integer), the root of unity congruent to a mod p
PadicNum teichmuller(long p, const mpz_class& a, long prec = kDefaultPrecision);

// <x> = x / (p^v(x) * omega(unit)), the projection to 1 + pZ_p; log_p(<x>) = log_p(x)
PadicNum principal_unit(const PadicNum& x);
PadicNum principal_unit_rational(long p, const mpq_class& q, long prec = kDefaultPrecision);

struct DerivativeResult {
    PadicNum value;                  // quotient at the largest step N
    std::vector<PadicNum> quotients; // quotients[n-1] = (f(p^n) - f(0)) / p^n
    long steps = 0;
    bool converged = true;
    std::string message;
};

// (f(p^n) - f(0)) / p^n for n = 1..n_max; Cauchy check v(q_{n+1} - q_n) >= n - slack
DerivativeResult padic_derivative(const std::function<PadicNum(const mpz_class&)>& f,
                                  long p, long prec = kDefaultPrecision,
                                  long n_max = 5, long slack = 2);

}  // namespace muderiv
