#pragma once

#include "muderiv/hecke_char.hpp"

#include <vector>

namespace muderiv {

// root-number data at one place of F (ell = 0 is the archimedean place)
struct PlaceRootData {
    long ell = 0;
    SplitKind kind = SplitKind::split;
    bool in_conductor = false;
    int cond_exp = 0;          // a(lambda*_w) for the prime(s) above ell
    RootOfUnity xi_value;      // lambda*_v(xi)
    RootOfUnity tate_W;        // W(lambda*_v) from Gauss sums
    int tate_sign = 1;         // W(lambda*_v) / lambda*_v(xi)
    RootOfUnity literal_W;     // (-1)^{a + v(c(O_K))} lambda*_v(xi) at non-split v, lambda*_v(xi) otherwise
    int literal_sign = 1;
};

struct RootNumberData {
    int W = 0;           // product of Tate constants, exactly +-1
    int W_literal = 0;   // product of the literal local formula
    std::vector<PlaceRootData> places;  // archimedean first, then the conductor places
    // tate sign at the F-place ell; 1 for places outside the conductor
    int sign_at(long ell) const;
    bool literal_agrees() const;
};

// lambda*_v(xi) for xi = sqrt(D_K); ell = 0 for the archimedean place
RootOfUnity lambda_star_xi(const GlobalHeckeChar& lam, long ell);
// exact Tate local constant W(lambda*_v) at a conductor place of F, as an element of Q(zeta_N)
Cyclo tate_local_constant(const GlobalHeckeChar& lam, long ell, long N);
// literal local root number formula: split places and sigma give xi_value, non-split finite places
// multiply by (-1)^{a + c_val}
RootOfUnity local_root_number(const LocalChar& chi_star, const RootOfUnity& xi_value, long c_val = 0);
RootOfUnity local_root_number_archimedean(const RootOfUnity& xi_value);

RootNumberData root_number_data(const GlobalHeckeChar& lam);
int global_root_number(const GlobalHeckeChar& lam);

// additive character psi_ell(y) = e(-{y}_ell) on Q_ell, y rational
RootOfUnity psi_local(long ell, const mpq_class& y);

}  // namespace muderiv
