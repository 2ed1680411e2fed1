#include "muderiv/cyclo.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace muderiv {

Real pi_real() {
    static const Real pi = boost::math::constants::pi<Real>();
    return pi;
}

Complex unit_complex(long num, long den) {
    Real a = 2 * pi_real() * Real(num) / Real(den);
    return Complex(cos(a), sin(a));
}

long gcd_l(long a, long b) { return std::gcd(a, b); }
long lcm_l(long a, long b) { return std::lcm(a, b); }

long mod_l(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

std::vector<long> prime_factors(long n) {
    std::vector<long> f;
    if (n < 0) n = -n;
    for (long d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            f.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) f.push_back(n);
    return f;
}

long euler_phi(long n) {
    long r = n;
    for (long q : prime_factors(n)) r = r / q * (q - 1);
    return r;
}

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

long powmod(long b, long e, long m) {
    __int128 r = 1, x = mod_l(b, m);
    while (e > 0) {
        if (e & 1) r = r * x % m;
        x = x * x % m;
        e >>= 1;
    }
    return static_cast<long>(r);
}

long invmod(long a, long m) {
    long g = m, x = 0, x1 = 1, a1 = mod_l(a, m);
    while (a1 != 0) {
        long q = g / a1;
        long t = g - q * a1;
        g = a1;
        a1 = t;
        t = x - q * x1;
        x = x1;
        x1 = t;
    }
    if (g != 1) throw std::domain_error("invmod: not invertible");
    return mod_l(x, m);
}

long legendre(long a, long p) {
    long r = mod_l(a, p);
    if (r == 0) return 0;
    return powmod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

long kronecker(long D, long n) {
    if (n <= 0) throw std::invalid_argument("kronecker: n must be positive");
    long result = 1;
    while (n % 2 == 0) {
        n /= 2;
        if (D % 2 == 0) return 0;
        long r = mod_l(D, 8);
        if (r == 3 || r == 5) result = -result;
    }
    for (long q : prime_factors(n)) {
        long m = n;
        long e = 0;
        while (m % q == 0) {
            m /= q;
            ++e;
        }
        long l = legendre(D, q);
        if (l == 0) return 0;
        if (l == -1 && e % 2 == 1) result = -result;
    }
    return result;
}

long primitive_root(long p) {
    if (p == 2) return 1;
    auto fs = prime_factors(p - 1);
    for (long g = 2; g < p; ++g) {
        bool ok = true;
        for (long f : fs)
            if (powmod(g, (p - 1) / f, p) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    throw std::logic_error("primitive_root: none found");
}

RootOfUnity::RootOfUnity(long num, long den) {
    if (den <= 0) throw std::invalid_argument("RootOfUnity: bad denominator");
    num = mod_l(num, den);
    long g = std::gcd(num, den);
    if (g == 0) g = den;
    num_ = num / g;
    den_ = den / g;
    if (num_ == 0) den_ = 1;
}

RootOfUnity RootOfUnity::operator*(const RootOfUnity& o) const {
    long d = std::lcm(den_, o.den_);
    return RootOfUnity(num_ * (d / den_) + o.num_ * (d / o.den_), d);
}

RootOfUnity RootOfUnity::inverse() const { return RootOfUnity(-num_, den_); }

RootOfUnity RootOfUnity::pow(long e) const {
    __int128 n = static_cast<__int128>(num_) * e;
    long r = static_cast<long>(n % den_);
    return RootOfUnity(r, den_);
}

std::string RootOfUnity::str() const {
    if (num_ == 0) return "1";
    std::ostringstream os;
    os << "e(" << num_ << "/" << den_ << ")";
    return os.str();
}

const std::vector<mpz_class>& cyclotomic_polynomial(long N) {
    static std::map<long, std::vector<mpz_class>> cache;
    static std::recursive_mutex mu;
    std::lock_guard<std::recursive_mutex> lock(mu);
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;
    // x^N - 1 divided by Phi_d for proper divisors d
    std::vector<mpz_class> num(N + 1, 0);
    num[0] = -1;
    num[N] = 1;
    for (long d = 1; d < N; ++d) {
        if (N % d != 0) continue;
        const std::vector<mpz_class> phi_d = cyclotomic_polynomial(d);
        long deg = static_cast<long>(num.size()) - 1;
        long dd = static_cast<long>(phi_d.size()) - 1;
        std::vector<mpz_class> quo(deg - dd + 1, 0);
        for (long i = deg; i >= dd; --i) {
            mpz_class c = num[i];
            if (c == 0) continue;
            quo[i - dd] = c;
            for (long j = 0; j <= dd; ++j) num[i - dd + j] -= c * phi_d[j];
        }
        num = quo;
    }
    return cache.emplace(N, num).first->second;
}

Cyclo::Cyclo(long N) : N_(N), c_(euler_phi(N), 0) {
    if (N < 1) throw std::invalid_argument("Cyclo: N must be positive");
}

void Cyclo::reduce(std::vector<mpq_class>& full) const {
    const auto& phi = cyclotomic_polynomial(N_);
    long d = static_cast<long>(phi.size()) - 1;
    for (long i = static_cast<long>(full.size()) - 1; i >= d; --i) {
        if (full[i] == 0) continue;
        mpq_class c = full[i];
        for (long j = 0; j <= d; ++j) full[i - d + j] -= c * phi[j];
    }
    full.resize(d);
}

Cyclo Cyclo::rational(long N, const mpq_class& q) {
    Cyclo r(N);
    r.c_[0] = q;
    return r;
}

Cyclo Cyclo::zeta_power(long N, long j) {
    Cyclo r(N);
    std::vector<mpq_class> full(N, 0);
    full[mod_l(j, N)] = 1;
    r.reduce(full);
    r.c_ = full;
    return r;
}

Cyclo Cyclo::root(long N, const RootOfUnity& z) {
    if (N % z.den() != 0) throw std::invalid_argument("Cyclo::root: order does not divide N");
    return zeta_power(N, z.num() * (N / z.den()));
}

Cyclo Cyclo::sqrt_minus_q(long N, long q) {
    if (N % q != 0) throw std::invalid_argument("Cyclo::sqrt_minus_q: q does not divide N");
    Cyclo r(N);
    std::vector<mpq_class> full(N, 0);
    for (long u = 1; u < q; ++u) full[u * (N / q)] += legendre(u, q);
    r.reduce(full);
    r.c_ = full;
    return r;
}

bool Cyclo::is_zero() const {
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

bool Cyclo::is_rational() const {
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

mpq_class Cyclo::rational_part() const { return c_[0]; }

Cyclo Cyclo::lift(long M) const {
    if (M == N_) return *this;
    if (M % N_ != 0) throw std::invalid_argument("Cyclo::lift: N does not divide M");
    Cyclo r(M);
    std::vector<mpq_class> full(M, 0);
    long s = M / N_;
    for (size_t i = 0; i < c_.size(); ++i) full[i * s] += c_[i];
    r.reduce(full);
    r.c_ = full;
    return r;
}

Cyclo Cyclo::operator+(const Cyclo& o) const {
    if (o.N_ != N_) {
        long M = std::lcm(N_, o.N_);
        return lift(M) + o.lift(M);
    }
    Cyclo r = *this;
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
    return r;
}

Cyclo Cyclo::operator-() const {
    Cyclo r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

Cyclo Cyclo::operator-(const Cyclo& o) const { return *this + (-o); }

Cyclo Cyclo::operator*(const Cyclo& o) const {
    if (o.N_ != N_) {
        long M = std::lcm(N_, o.N_);
        return lift(M) * o.lift(M);
    }
    std::vector<mpq_class> full(c_.size() + o.c_.size(), 0);
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (size_t j = 0; j < o.c_.size(); ++j)
            if (o.c_[j] != 0) full[i + j] += c_[i] * o.c_[j];
    }
    Cyclo r(N_);
    reduce(full);
    r.c_ = full;
    return r;
}

Cyclo Cyclo::operator*(const mpq_class& q) const {
    Cyclo r = *this;
    for (auto& x : r.c_) x *= q;
    return r;
}

Cyclo Cyclo::pow(long e) const {
    if (e < 0) throw std::invalid_argument("Cyclo::pow: negative exponent");
    Cyclo r = rational(N_, 1), b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

Cyclo Cyclo::conj() const {
    std::vector<mpq_class> full(N_, 0);
    for (size_t i = 0; i < c_.size(); ++i) full[mod_l(-static_cast<long>(i), N_)] += c_[i];
    Cyclo r(N_);
    reduce(full);
    r.c_ = full;
    return r;
}

bool Cyclo::operator==(const Cyclo& o) const {
    if (o.N_ != N_) {
        long M = std::lcm(N_, o.N_);
        return lift(M) == o.lift(M);
    }
    return c_ == o.c_;
}

Complex Cyclo::to_complex() const {
    Complex s(0, 0);
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        Real q = Real(c_[i].get_num().get_str()) / Real(c_[i].get_den().get_str());
        s += q * unit_complex(static_cast<long>(i), N_);
    }
    return s;
}

std::string Cyclo::str() const {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        if (!first) os << " + ";
        first = false;
        os << c_[i].get_str();
        if (i > 0) os << "*z" << N_ << "^" << i;
    }
    if (first) os << "0";
    return os.str();
}

}  // namespace muderiv
