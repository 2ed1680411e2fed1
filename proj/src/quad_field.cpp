#include "muderiv/quad_field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace muderiv {

std::string to_string(SplitKind k) {
    switch (k) {
        case SplitKind::split: return "split";
        case SplitKind::inert: return "inert";
        case SplitKind::ramified: return "ramified";
    }
    return "?";
}

namespace {

bool squarefree(long d) {
    for (long q = 2; q * q <= d; ++q)
        if (d % (q * q) == 0) return false;
    return true;
}

std::array<long, 3> reduce_form(long a, long b, long c) {
    for (;;) {
        // b into (-a, a]
        if (b > a || b <= -a) {
            long k = static_cast<long>(std::floor(static_cast<double>(a - b) / (2.0 * a)));
            long nb = b + 2 * a * k;
            c = c + b * k + a * k * k;
            b = nb;
            continue;
        }
        if (a > c) {
            std::swap(a, c);
            b = -b;
            continue;
        }
        if (a == c && b < 0) b = -b;
        return {a, b, c};
    }
}

}  // namespace

std::vector<std::array<long, 3>> reduced_forms(long D, long bound) {
    if (D >= 0) throw std::invalid_argument("reduced_forms: discriminant must be negative");
    if (-D > bound) throw std::out_of_range("reduced_forms: |D| exceeds configured bound");
    std::vector<std::array<long, 3>> out;
    for (long a = 1; 3 * a * a <= -D; ++a) {
        for (long b = -a + 1; b <= a; ++b) {
            if (mod_l(b - D, 2) != 0) continue;
            long num = b * b - D;
            if (num % (4 * a) != 0) continue;
            long c = num / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            out.push_back({a, b, c});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

QuadField::QuadField(long d, long class_bound) : d_(d) {
    if (d <= 0 || !squarefree(d)) throw std::invalid_argument("QuadField: d must be a positive squarefree integer");
    if (d % 4 == 3) {
        D_ = -d;
        t_ = 1;
        n_ = (1 - D_) / 4;
    } else {
        D_ = -4 * d;
        t_ = 0;
        n_ = d;
    }
    forms_ = muderiv::reduced_forms(D_, class_bound);
    h_ = static_cast<int>(forms_.size());
    w_ = D_ == -4 ? 4 : (D_ == -3 ? 6 : 2);
}

Elt QuadField::xi() const {
    if (t_ == 1) return {-1, 2};
    return {0, 2};
}

long long QuadField::norm(const Elt& a) const { return a.x * a.x + t_ * a.x * a.y + n_ * a.y * a.y; }
long long QuadField::trace(const Elt& a) const { return 2 * a.x + t_ * a.y; }

Elt QuadField::mul(const Elt& a, const Elt& b) const {
    long long yy = a.y * b.y;
    return {a.x * b.x - n_ * yy, a.x * b.y + a.y * b.x + t_ * yy};
}

Elt QuadField::conj(const Elt& a) const { return {a.x + t_ * a.y, -a.y}; }

Elt QuadField::pow(const Elt& a, long e) const {
    Elt r{1, 0}, b = a;
    while (e > 0) {
        if (e & 1) r = mul(r, b);
        b = mul(b, b);
        e >>= 1;
    }
    return r;
}

Cyclo QuadField::embed(const Elt& a, long N) const {
    if (t_ != 1 || !is_prime(-D_)) throw std::domain_error("QuadField::embed: needs prime odd discriminant");
    Cyclo g = Cyclo::sqrt_minus_q(N, -D_);
    // omega = (1 + g)/2
    Cyclo omega = (Cyclo::rational(N, 1) + g) * mpq_class(1, 2);
    return Cyclo::rational(N, mpq_class(static_cast<long>(a.x))) + omega * mpq_class(static_cast<long>(a.y));
}

Complex QuadField::to_complex(const Elt& a) const {
    Real s = boost::multiprecision::sqrt(Real(-D_));
    Complex omega = t_ == 1 ? Complex(Real(1) / 2, s / 2) : Complex(Real(0), s / 2);
    return Complex(Real(a.x)) + Complex(Real(a.y)) * omega;
}

long QuadField::residue(const Elt& a, const PrimeIdeal& pr) const {
    if (pr.residue_degree != 1) throw std::domain_error("QuadField::residue: degree-one prime required");
    __int128 v = static_cast<__int128>(a.x) + static_cast<__int128>(a.y) * pr.root;
    long r = static_cast<long>(v % pr.ell);
    return r < 0 ? r + pr.ell : r;
}

long QuadField::valuation(const Elt& a, const PrimeIdeal& pr) const {
    if (a.x == 0 && a.y == 0) throw std::domain_error("QuadField::valuation: zero");
    if (pr.residue_degree == 2) {
        long v = 0;
        Elt b = a;
        while (b.x % pr.ell == 0 && b.y % pr.ell == 0) {
            b.x /= pr.ell;
            b.y /= pr.ell;
            ++v;
        }
        return v;
    }
    Elt pi = prime_generator(pr);
    Elt pib = conj(pi);
    long long np = norm(pi);
    long v = 0;
    Elt b = a;
    for (;;) {
        Elt c = mul(b, pib);
        if (c.x % np != 0 || c.y % np != 0) break;
        b = {c.x / np, c.y / np};
        ++v;
    }
    return v;
}

Elt QuadField::prime_generator(const PrimeIdeal& pr) const {
    if (pr.residue_degree == 2) return {pr.ell, 0};
    if (h_ != 1) throw std::domain_error("QuadField::prime_generator: class number must be 1");
    long long target = pr.ell;
    long long ymax = static_cast<long long>(2.0 * std::sqrt(4.0 * target / -D_)) + 2;
    for (long long y = 0; y <= ymax; ++y) {
        long long xmax = static_cast<long long>(2.0 * std::sqrt(static_cast<double>(target))) + std::llabs(y) + 2;
        for (long long x = -xmax; x <= xmax; ++x) {
            Elt e{x, y};
            if (norm(e) == target && residue(e, pr) == 0) return e;
        }
    }
    throw std::logic_error("QuadField::prime_generator: no generator found");
}

Elt QuadField::ideal_generator(const IdealRep& I) const {
    if (h_ != 1) throw std::domain_error("QuadField::ideal_generator: class number must be 1");
    // scale * (a u + (b + omega) v) with norm of the primitive part = a
    long long ymax = static_cast<long long>(2.0 * std::sqrt(4.0 * I.a / -D_)) + 2;
    for (long long v = 0; v <= ymax; ++v) {
        long long umax = static_cast<long long>(std::sqrt(static_cast<double>(I.a))) + 2 + std::llabs(v) * (I.b + 1);
        for (long long u = -umax; u <= umax; ++u) {
            Elt e{I.a * u + I.b * v, v};
            if (norm(e) == I.a) return {e.x * I.scale, e.y * I.scale};
        }
    }
    throw std::logic_error("QuadField::ideal_generator: no generator found");
}

int QuadField::class_index(const IdealRep& I) const {
    long b2 = 2 * I.b + t_;
    long c = (I.b * I.b + t_ * I.b + n_) / I.a;
    auto f = reduce_form(I.a, b2, c);
    auto it = std::find(forms_.begin(), forms_.end(), f);
    if (it == forms_.end()) throw std::logic_error("QuadField::class_index: form not found");
    return static_cast<int>(it - forms_.begin());
}

PrimeSplit classify_prime(const QuadField& K, long ell) {
    if (!is_prime(ell)) throw std::invalid_argument("classify_prime: not a prime");
    PrimeSplit ps;
    ps.ell = ell;
    std::vector<long> roots;
    for (long r = 0; r < ell; ++r) {
        long long v = static_cast<long long>(r) * r - K.trace_omega() * r + K.norm_omega();
        if (mod_l(static_cast<long>(v % ell), ell) == 0) roots.push_back(r);
    }
    if (-K.disc() % ell == 0) {
        ps.kind = SplitKind::ramified;
        ps.primes_above.push_back({ell, roots.at(0), 1, 2});
    } else if (kronecker(K.disc(), ell) == 1) {
        ps.kind = SplitKind::split;
        ps.primes_above.push_back({ell, roots.at(0), 1, 1});
        ps.primes_above.push_back({ell, roots.at(1), 1, 1});
    } else {
        ps.kind = SplitKind::inert;
        ps.primes_above.push_back({ell, 0, 2, 1});
    }
    return ps;
}

std::vector<IdealRep> ideals_up_to_norm(const QuadField& K, long B) {
    if (B < 1) throw std::invalid_argument("ideals_up_to_norm: B must be positive");
    std::vector<IdealRep> out;
    for (long c = 1; c * c <= B; ++c) {
        for (long a = 1; c * c * a <= B; ++a) {
            for (long b = 0; b < a; ++b) {
                long long nb = static_cast<long long>(b) * b + K.trace_omega() * b + K.norm_omega();
                if (nb % a != 0) continue;
                IdealRep I{a, b, c, c * c * a, 0};
                I.class_index = K.class_index(I);
                out.push_back(I);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const IdealRep& x, const IdealRep& y) {
        return std::tie(x.norm, x.scale, x.a, x.b) < std::tie(y.norm, y.scale, y.a, y.b);
    });
    return out;
}

int class_number(const QuadField& K) { return K.class_number(); }

long ideal_count_oracle(long D, long n) {
    long s = 0;
    for (long m = 1; m <= n; ++m)
        if (n % m == 0) s += kronecker(D, m);
    return s;
}

std::string ideals_csv(const std::vector<IdealRep>& ideals) {
    std::ostringstream os;
    os << "norm,a,b,scale,class_index\n";
    for (const auto& I : ideals) os << I.norm << "," << I.a << "," << I.b << "," << I.scale << "," << I.class_index << "\n";
    return os.str();
}

}  // namespace muderiv
