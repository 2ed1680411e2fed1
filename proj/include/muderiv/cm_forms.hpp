#pragma once

#include "muderiv/hecke_char.hpp"

#include <optional>
#include <string>
#include <vector>

namespace muderiv {

// f = sum over integral ideals a of lambda(a) q^{N a}, weight k+1, level |D_K| N(c)
struct QExpansion {
    long bound = 0;
    int weight = 0;
    long level = 0;
    std::string label;
    std::vector<Cyclo> a;       // a[n], 0 <= n <= bound; a[0] = 0
    std::vector<Complex> approx;

    const Cyclo& coeff(long n) const { return a.at(n); }
};

QExpansion q_expansion(const GlobalHeckeChar& lam, long B);

struct ProbeResult {
    long bound = 0;
    Real y = 0;
    Complex ratio;           // phi(1/y) / (y^w phi(y))
    double residual = 0;     // |ratio - sign|
    double residual_half = 0;  // the same at bound / 2
    bool conclusive = false;
    int sign = 0;            // 0 when inconclusive
};

// theta symmetry phi(1/y) = W y^w phi(y), phi(y) = sum a_n e^{-2 pi n y / sqrt(N)}
ProbeResult functional_equation_probe(const QExpansion& f, double y = 1.1, double tol = 1e-6);

// n,a_n,re,im
std::string qexp_csv(const QExpansion& f);

}  // namespace muderiv
