#pragma once

#include "muderiv/cyclo.hpp"
#include "muderiv/padic.hpp"

#include <gmpxx.h>

#include <string>

namespace muderiv {

// p-adic valuation with rational values, +inf for zero
struct Valuation {
    bool infinite = true;
    mpq_class value = 0;

    static Valuation inf() { return {}; }
    static Valuation of(const mpq_class& v) { return {false, v}; }
    static Valuation of(long v) { return {false, mpq_class(v)}; }

    bool operator==(const Valuation& o) const;
    bool operator<(const Valuation& o) const;
    bool operator<=(const Valuation& o) const { return !(o < *this); }
    bool operator>=(const Valuation& o) const { return !(*this < o); }
    Valuation operator+(const Valuation& o) const;
    Valuation operator-(const mpq_class& o) const;
    std::string str() const;
};

Valuation min_val(const Valuation& a, const Valuation& b);

// coef * root * sqrt(radicand): coef rational, root of unity with argument in [0, pi),
// radicand a positive squarefree integer. Zero iff coef == 0.
class ExactValue {
public:
    ExactValue() = default;
    ExactValue(const mpq_class& coef, const RootOfUnity& root = RootOfUnity::one(), long radicand = 1);

    static ExactValue zero() { return ExactValue(0); }
    static ExactValue one() { return ExactValue(1); }
    static ExactValue root(const RootOfUnity& z) { return ExactValue(1, z); }
    static ExactValue sqrt(const mpq_class& q);  // positive square root of a positive rational

    const mpq_class& coef() const { return coef_; }
    const RootOfUnity& root() const { return root_; }
    long radicand() const { return radicand_; }
    bool is_zero() const { return coef_ == 0; }
    bool is_rational() const { return root_.is_one() && radicand_ == 1; }

    ExactValue operator*(const ExactValue& o) const;
    ExactValue operator/(const ExactValue& o) const;
    ExactValue operator-() const;
    // addition only between values sharing root and radicand (or with zero)
    ExactValue operator+(const ExactValue& o) const;
    ExactValue operator-(const ExactValue& o) const { return *this + (-o); }
    ExactValue inverse() const;
    ExactValue pow(long e) const;
    bool operator==(const ExactValue& o) const;
    bool operator!=(const ExactValue& o) const { return !(*this == o); }

    Valuation valuation(long p) const;
    Complex to_complex() const;
    std::string str() const;

private:
    mpq_class coef_ = 0;
    RootOfUnity root_;
    long radicand_ = 1;
    void normalise();
};

// iota_p on roots of unity of order dividing p-1: zeta_m^a -> omega(g)^{choice*a*(p-1)/m}
class TeichmullerEmbedding {
public:
    TeichmullerEmbedding(long p, long choice = 1, long prec = kDefaultPrecision);
    long p() const { return p_; }
    long choice() const { return choice_; }
    bool embeds(const RootOfUnity& z) const { return (p_ - 1) % z.den() == 0; }
    PadicNum operator()(const RootOfUnity& z) const;

private:
    long p_;
    long choice_;
    long prec_;
    long g_;
    PadicNum omega_g_;
};

// v_p(r * z - 1) for rational r and root of unity z, exact (rational valued)
Valuation val_root_minus_one(const RootOfUnity& z, const mpq_class& r, const TeichmullerEmbedding& iota);

}  // namespace muderiv
