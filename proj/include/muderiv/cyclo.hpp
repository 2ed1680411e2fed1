#pragma once

#include <gmpxx.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <string>
#include <vector>

namespace muderiv {

using Real = boost::multiprecision::cpp_bin_float_quad;
using Complex = boost::multiprecision::cpp_complex_quad;

Real pi_real();
// e^{2 pi i num/den}
Complex unit_complex(long num, long den);

long gcd_l(long a, long b);
long lcm_l(long a, long b);
long mod_l(long a, long m);
long euler_phi(long n);
std::vector<long> prime_factors(long n);
bool is_prime(long n);
long legendre(long a, long p);       // p odd prime
long kronecker(long D, long n);      // Kronecker symbol (D|n), n > 0
long powmod(long b, long e, long m);
long invmod(long a, long m);
long primitive_root(long p);

// e^{2 pi i num/den}, stored reduced with 0 <= num < den
class RootOfUnity {
public:
    RootOfUnity() = default;
    RootOfUnity(long num, long den);

    static RootOfUnity one() { return {}; }
    static RootOfUnity minus_one() { return {1, 2}; }

    long num() const { return num_; }
    long den() const { return den_; }
    long order() const { return den_; }
    bool is_one() const { return num_ == 0; }

    RootOfUnity operator*(const RootOfUnity& o) const;
    RootOfUnity inverse() const;
    RootOfUnity pow(long e) const;
    bool operator==(const RootOfUnity& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RootOfUnity& o) const { return !(*this == o); }
    Complex to_complex() const { return unit_complex(num_, den_); }
    std::string str() const;

private:
    long num_ = 0;
    long den_ = 1;
};

// Element of Q(zeta_N), coefficients on 1, z, ..., z^{phi(N)-1} after reduction mod Phi_N.
class Cyclo {
public:
    Cyclo() : Cyclo(1) {}
    explicit Cyclo(long N);

    static Cyclo rational(long N, const mpq_class& q);
    static Cyclo zeta_power(long N, long j);
    static Cyclo root(long N, const RootOfUnity& z);  // requires z.order() | N
    // Gauss sum sum_u (u|q) zeta_q^u, equal to sqrt(-q) for q = 3 mod 4
    static Cyclo sqrt_minus_q(long N, long q);

    long N() const { return N_; }
    const std::vector<mpq_class>& coeffs() const { return c_; }
    bool is_zero() const;
    bool is_rational() const;
    mpq_class rational_part() const;  // constant coefficient

    Cyclo lift(long M) const;  // N | M
    Cyclo operator+(const Cyclo& o) const;
    Cyclo operator-(const Cyclo& o) const;
    Cyclo operator-() const;
    Cyclo operator*(const Cyclo& o) const;
    Cyclo operator*(const mpq_class& q) const;
    Cyclo pow(long e) const;
    Cyclo conj() const;
    bool operator==(const Cyclo& o) const;
    bool operator!=(const Cyclo& o) const { return !(*this == o); }

    Complex to_complex() const;
    std::string str() const;

private:
    long N_;
    std::vector<mpq_class> c_;
    void reduce(std::vector<mpq_class>& full) const;
};

const std::vector<mpz_class>& cyclotomic_polynomial(long N);

}  // namespace muderiv
