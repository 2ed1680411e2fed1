#pragma once

#include "muderiv/cyclo.hpp"

#include <array>
#include <string>
#include <vector>

namespace muderiv {

// x + y*omega with omega^2 = t*omega - n
struct Elt {
    long long x = 0;
    long long y = 0;
};

enum class SplitKind { split, inert, ramified };
std::string to_string(SplitKind k);

// prime ideal (ell, omega - root) for split/ramified; (ell) for inert
struct PrimeIdeal {
    long ell = 0;
    long root = 0;
    int residue_degree = 1;
    int ramification = 1;
};

struct PrimeSplit {
    long ell = 0;
    SplitKind kind = SplitKind::inert;
    std::vector<PrimeIdeal> primes_above;
};

// scale * (a Z + (b + omega) Z), norm = scale^2 * a
struct IdealRep {
    long a = 1;
    long b = 0;
    long scale = 1;
    long norm = 1;
    int class_index = 0;
};

class QuadField {
public:
    explicit QuadField(long d, long class_bound = 1000000);

    long d() const { return d_; }
    long disc() const { return D_; }
    long trace_omega() const { return t_; }
    long norm_omega() const { return n_; }
    int class_number() const { return h_; }
    int unit_count() const { return w_; }
    // xi = sqrt(D_K) in the omega basis
    Elt xi() const;

    long long norm(const Elt& a) const;
    long long trace(const Elt& a) const;
    Elt mul(const Elt& a, const Elt& b) const;
    Elt conj(const Elt& a) const;
    Elt add(const Elt& a, const Elt& b) const { return {a.x + b.x, a.y + b.y}; }
    Elt neg(const Elt& a) const { return {-a.x, -a.y}; }
    Elt pow(const Elt& a, long e) const;
    bool divides(long long m, const Elt& a) const { return a.x % m == 0 && a.y % m == 0; }

    // image of a in Q(zeta_N) with sqrt(D) realised as a Gauss sum; needs D odd and |D| | N
    Cyclo embed(const Elt& a, long N) const;
    Complex to_complex(const Elt& a) const;

    // valuation of a at the prime above ell given by pr
    long valuation(const Elt& a, const PrimeIdeal& pr) const;
    // residue of a modulo a degree-one prime: x + y*root mod ell
    long residue(const Elt& a, const PrimeIdeal& pr) const;
    // generator of a principal prime ideal (h_K = 1 only)
    Elt prime_generator(const PrimeIdeal& pr) const;
    // generator of a principal ideal (h_K = 1 only)
    Elt ideal_generator(const IdealRep& I) const;

    const std::vector<std::array<long, 3>>& reduced_forms() const { return forms_; }
    int class_index(const IdealRep& I) const;

private:
    long d_, D_, t_, n_;
    int h_ = 0, w_ = 2;
    std::vector<std::array<long, 3>> forms_;
};

PrimeSplit classify_prime(const QuadField& K, long ell);
std::vector<IdealRep> ideals_up_to_norm(const QuadField& K, long B);
int class_number(const QuadField& K);
std::vector<std::array<long, 3>> reduced_forms(long D, long bound = 1000000);
// number of ideals of norm n: sum over m | n of chi_D(m)
long ideal_count_oracle(long D, long n);
std::string ideals_csv(const std::vector<IdealRep>& ideals);

}  // namespace muderiv
