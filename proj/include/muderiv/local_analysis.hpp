#pragma once

#include "muderiv/hecke_char.hpp"
#include "muderiv/root_number.hpp"

#include <string>
#include <vector>

namespace muderiv {

enum class FactorKind { a_split, a_unramified, A_ramified, A_inert, p_indicator, constant };
std::string factor_kind_str(FactorKind k);

// coef * |w|^{e s}, |w| = 1/ell the absolute value of the uniformizer of F_v
struct SMonomial {
    mpq_class coef;
    long e = 0;
};

// constant * sum coef_j |w|^{e_j s}. The value is taken at s = 0 and the derivative is
// derivative_coef() * log_p|w|.
struct LocalFactor {
    long ell = 0;  // 0 when the factor does not depend on s
    SplitKind kind = SplitKind::split;
    FactorKind fkind = FactorKind::constant;
    ExactValue constant = ExactValue::one();
    std::vector<SMonomial> terms{{mpq_class(1), 0}};
    bool want_derivative = true;

    ExactValue value() const;
    ExactValue derivative_coef() const;
    bool vanished() const { return value().is_zero(); }
    bool has_derivative() const { return want_derivative && ell != 0; }
    mpq_class rational_value() const;  // sum of the coefficients
    mpq_class rational_derivative() const;  // sum coef * e
    Valuation value_val(long p) const { return value().valuation(p); }
    // v_p of the derivative, log_p|w| included
    Valuation derivative_val(long p, long prec = kDefaultPrecision) const;
    // sum coef * <ell^{-1}>^{e s} in Q_p, the rational part evaluated at an integer s
    PadicNum rational_part_at(long p, const mpz_class& s, long prec = kDefaultPrecision) const;
    std::string place_str() const;
};

LocalFactor constant_factor(const ExactValue& v, FactorKind fkind = FactorKind::constant);

int cond_exponent(const LocalChar& chi);

// inf over x of v_p(lambda_v(x) - 1); infinite for the trivial character
Valuation mu_p_local(const LocalChar& chi, const TeichmullerEmbedding& iota);
Valuation mu_p_local(const LocalChar& chi, long p);

// derivative coefficient of lambda'*(u w^n) = c n tau(u w^n) log_p|w|
mpq_class lambda_prime_star(long n, int tau_value, int c = 2);

// sum_{i=0}^{n} t^i |w|^{2 i s}; n < 0 gives zero
LocalFactor whittaker_a(long ell, SplitKind kind, long n, int t);
// t read from the uniformizer value of an unramified F-level or non-split component
LocalFactor whittaker_a(long n, const LocalChar& chi_star);
// same factor; its derivative is derivative_coef() * log_p|w|
LocalFactor whittaker_a_deriv(long n, const LocalChar& chi_star);

// epsilon(chi |.|^t, psi_n) with psi_n(y) = psi(ell^n y)
struct EpsilonFactor {
    long ell = 0;
    int a = 0;
    long n_psi = 0;
    long t = 0;
    Cyclo gauss;      // chi(w)^a sum_x chi^{-1}(x) psi(x / w^a)
    mpq_class scale;  // ell^{-t a} and the psi-shift factor
    Cyclo value() const { return gauss * scale; }
    Complex to_complex() const { return value().to_complex(); }
};

EpsilonFactor eps_factor(const LocalChar& chi_plus, long n_psi = 0, long t = 0);

// c * z * sqrt(r) with z a 4th root of unity and r in {1, ell}, if x has that shape
std::optional<ExactValue> recognise_quadratic(const Cyclo& x, long ell);

// epsilon at the ramified place after the consistency pin kappa in {1, i, -1, -i}
struct PinnedEpsilon {
    long q = 0;
    ExactValue raw;
    RootOfUnity kappa;
    ExactValue value;  // sigma * q^{-1/2}
    int sigma = 0;
};

// the unique kappa making the two-term cancellation at q equivalent to tau_q(eta) = -s_q
PinnedEpsilon pin_epsilon(const QuadField& K, int s_q, long n_psi = 0);

// A at the ramified place: q^{-1/2}[tau(q)|w|^{-2s} + tau(-2 eta) sigma |w|^{2s(v(eta)+1)}]
LocalFactor whittaker_A_ramified(const QuadField& K, const mpq_class& eta, const PinnedEpsilon& eps);
// A at an inert place where lambda is unramified, t = lambda*(w)
LocalFactor whittaker_A_inert(long ell, const mpq_class& eta, int t);
// derivative companions; the derivative lives in the returned factor
LocalFactor whittaker_A_deriv(const QuadField& K, const mpq_class& eta, const PinnedEpsilon& eps);
LocalFactor whittaker_A_deriv(long ell, const mpq_class& eta, int t);

LocalFactor p_indicator(long p, bool inside);

// place,kind,vp_value,vanished,vp_derivative
std::string factors_csv(const std::vector<LocalFactor>& fs, long p);

}  // namespace muderiv
