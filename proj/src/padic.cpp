#include "muderiv/padic.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace muderiv {

mpz_class ipow(long p, long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
    return r;
}

long vp_integer(const mpz_class& n, long p) {
    if (n == 0) throw std::domain_error("vp_integer: zero");
    mpz_class pp = p;
    return static_cast<long>(mpz_remove(mpz_class().get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t()));
}

long vp_rational(const mpq_class& q, long p) {
    if (q == 0) throw std::domain_error("vp_rational: zero");
    return vp_integer(q.get_num(), p) - vp_integer(q.get_den(), p);
}

PadicNum::PadicNum(long p, long prec) : p_(p), val_(kValInf), prec_(prec), unit_(0) {
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("PadicNum: p must be an odd prime");
}

PadicNum PadicNum::from_parts(long p, long val, const mpz_class& unit, long prec) {
    PadicNum x(p, prec);
    if (prec <= 0) {
        x.val_ = val;
        x.prec_ = 0;
        x.unit_ = 0;
        return x;
    }
    x.val_ = val;
    x.prec_ = prec;
    x.unit_ = unit;
    x.normalise();
    return x;
}

void PadicNum::normalise() {
    if (val_ == kValInf) return;
    mpz_class mod = ipow(p_, prec_);
    unit_ %= mod;
    if (unit_ < 0) unit_ += mod;
    if (unit_ == 0) {
        val_ += prec_;
        prec_ = 0;
        return;
    }
    long k = 0;
    mpz_class pp = p_;
    while (mpz_divisible_p(unit_.get_mpz_t(), pp.get_mpz_t())) {
        unit_ /= p_;
        ++k;
    }
    val_ += k;
    prec_ -= k;
    unit_ %= ipow(p_, prec_);
}

PadicNum PadicNum::from_integer(long p, const mpz_class& n, long prec) {
    if (n == 0) return PadicNum(p, prec);
    long v = vp_integer(n, p);
    mpz_class u = n / ipow(p, v);
    return from_parts(p, v, u, prec);
}

PadicNum PadicNum::from_integer_abs(long p, const mpz_class& n, long abs_prec) {
    mpz_class mod = ipow(p, abs_prec);
    mpz_class r = n % mod;
    if (r < 0) r += mod;
    if (r == 0) return from_parts(p, abs_prec, 0, 0);
    long v = vp_integer(r, p);
    return from_parts(p, v, r / ipow(p, v), abs_prec - v);
}

PadicNum PadicNum::from_rational(long p, const mpq_class& q, long prec) {
    if (q == 0) return PadicNum(p, prec);
    mpz_class num = q.get_num(), den = q.get_den();
    long vn = vp_integer(num, p), vd = vp_integer(den, p);
    num /= ipow(p, vn);
    den /= ipow(p, vd);
    mpz_class mod = ipow(p, prec), inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
    return from_parts(p, vn - vd, num * inv, prec);
}

std::vector<long> PadicNum::digits() const {
    std::vector<long> d;
    if (is_zero()) return d;
    mpz_class u = unit_;
    for (long i = 0; i < prec_; ++i) {
        mpz_class r = u % p_;
        d.push_back(r.get_si());
        u /= p_;
    }
    return d;
}

PadicNum PadicNum::operator-() const {
    PadicNum r = *this;
    if (!is_zero()) {
        r.unit_ = ipow(p_, prec_) - unit_;
        r.normalise();
    }
    return r;
}

PadicNum PadicNum::operator+(const PadicNum& o) const {
    if (p_ != o.p_) throw std::invalid_argument("PadicNum: mixed primes");
    if (is_exact_zero()) return o;
    if (o.is_exact_zero()) return *this;
    long a = std::min(abs_prec(), o.abs_prec());
    long v0 = std::min(val_, o.val_);
    if (a <= v0) return from_parts(p_, a, 0, 0);
    mpz_class s = 0;
    if (!is_zero()) s += unit_ * ipow(p_, val_ - v0);
    if (!o.is_zero()) s += o.unit_ * ipow(p_, o.val_ - v0);
    return from_parts(p_, v0, s, a - v0);
}

PadicNum PadicNum::operator-(const PadicNum& o) const { return *this + (-o); }

PadicNum PadicNum::operator*(const PadicNum& o) const {
    if (p_ != o.p_) throw std::invalid_argument("PadicNum: mixed primes");
    if (is_exact_zero() || o.is_exact_zero()) return PadicNum(p_, std::max(prec_, o.prec_));
    if (is_zero() || o.is_zero()) {
        // O(p^a) * x = O(p^{a + v(x)})
        return from_parts(p_, val_ + o.val_, 0, 0);
    }
    long pr = std::min(prec_, o.prec_);
    return from_parts(p_, val_ + o.val_, unit_ * o.unit_, pr);
}

PadicNum PadicNum::operator/(const PadicNum& o) const {
    if (o.is_zero()) throw std::domain_error("PadicNum: division by zero");
    if (is_exact_zero()) return *this;
    if (is_zero()) return from_parts(p_, val_ - o.val_, 0, 0);
    long pr = std::min(prec_, o.prec_);
    mpz_class mod = ipow(p_, pr), inv;
    mpz_invert(inv.get_mpz_t(), o.unit_.get_mpz_t(), mod.get_mpz_t());
    return from_parts(p_, val_ - o.val_, unit_ * inv, pr);
}

PadicNum PadicNum::pow(const mpz_class& e) const {
    if (e == 0) return from_integer(p_, 1, prec_ == 0 ? kDefaultPrecision : prec_);
    if (is_exact_zero()) {
        if (e < 0) throw std::domain_error("PadicNum: zero to negative power");
        return *this;
    }
    if (is_zero()) {
        if (e < 0) throw std::domain_error("PadicNum: zero to negative power");
        if (!e.fits_slong_p()) throw std::overflow_error("PadicNum: exponent");
        return from_parts(p_, val_ * e.get_si(), 0, 0);
    }
    mpz_class mod = ipow(p_, prec_), u = unit_;
    mpz_class ae = abs(e);
    if (e < 0) mpz_invert(u.get_mpz_t(), u.get_mpz_t(), mod.get_mpz_t());
    mpz_class r;
    mpz_powm(r.get_mpz_t(), u.get_mpz_t(), ae.get_mpz_t(), mod.get_mpz_t());
    mpz_class v = mpz_class(val_) * e;
    if (!v.fits_slong_p()) throw std::overflow_error("PadicNum: valuation overflow");
    return from_parts(p_, v.get_si(), r, prec_);
}

PadicNum PadicNum::shift(long k) const {
    PadicNum r = *this;
    if (r.val_ != kValInf) r.val_ += k;
    return r;
}

bool PadicNum::congruent(const PadicNum& o) const {
    PadicNum d = *this - o;
    return d.is_zero();
}

mpz_class PadicNum::to_integer() const {
    if (is_zero()) return 0;
    if (val_ < 0) throw std::domain_error("PadicNum: negative valuation");
    return unit_ * ipow(p_, val_);
}

std::string PadicNum::str() const {
    std::ostringstream os;
    if (is_exact_zero()) return "0";
    if (is_zero()) {
        os << "O(" << p_ << "^" << val_ << ")";
        return os.str();
    }
    os << unit_.get_str() << "*" << p_ << "^" << val_ << " + O(" << p_ << "^" << abs_prec() << ")";
    return os.str();
}

long val_p(const PadicNum& x) { return x.val(); }

PadicNum iwasawa_log(const PadicNum& x) {
    if (x.is_zero()) throw std::domain_error("iwasawa_log: zero input");
    const long p = x.p();
    const long prec = x.prec();
    const long guard = 20;
    const long work = prec + guard;
    mpz_class mod = ipow(p, work);
    // u^(p-1) = 1 + z with p | z
    mpz_class u = x.unit(), e = p - 1, w;
    mpz_powm(w.get_mpz_t(), u.get_mpz_t(), e.get_mpz_t(), mod.get_mpz_t());
    mpz_class z = w - 1;
    if (z == 0) return PadicNum::from_parts(p, prec, 0, 0);
    long vz = vp_integer(z, p);
    // sum_{k>=1} (-1)^{k+1} z^k / k, modulo p^work
    mpz_class sum = 0, zk = 1;
    // terms with k > kmax have valuation k*vz - v_p(k) >= work
    const long kmax = work / vz + 12;
    for (long k = 1; k <= kmax; ++k) {
        zk = (zk * z) % ipow(p, work + 64);
        long vk = 0;
        long kk = k;
        while (kk % p == 0) {
            kk /= p;
            ++vk;
        }
        if (k * vz - vk >= work) continue;
        mpz_class term = zk / ipow(p, vk);
        mpz_class inv;
        mpz_class kkz = kk;
        mpz_invert(inv.get_mpz_t(), kkz.get_mpz_t(), mod.get_mpz_t());
        term = (term * inv) % mod;
        if (k % 2 == 0) term = -term;
        sum = (sum + term) % mod;
    }
    // divide by p - 1 (a unit)
    mpz_class inv, pm1 = p - 1;
    mpz_invert(inv.get_mpz_t(), pm1.get_mpz_t(), mod.get_mpz_t());
    sum = (sum * inv) % mod;
    if (sum < 0) sum += mod;
    // x's unit part is known to absolute precision prec, so is the log
    return PadicNum::from_integer_abs(p, sum, prec);
}

PadicNum iwasawa_log_rational(long p, const mpq_class& q, long prec) {
    return iwasawa_log(PadicNum::from_rational(p, q, prec));
}

PadicNum teichmuller(long p, const mpz_class& a, long prec) {
    mpz_class mod = ipow(p, prec);
    mpz_class x = a % p;
    if (x < 0) x += p;
    if (x == 0) throw std::domain_error("teichmuller: not a unit");
    // x <- x^p iterated prec times converges to the root of unity
    mpz_class pp = p;
    for (long i = 0; i < prec; ++i) mpz_powm(x.get_mpz_t(), x.get_mpz_t(), pp.get_mpz_t(), mod.get_mpz_t());
    return PadicNum::from_parts(p, 0, x, prec);
}

PadicNum principal_unit(const PadicNum& x) {
    if (x.is_zero()) throw std::domain_error("principal_unit: zero");
    PadicNum u = PadicNum::from_parts(x.p(), 0, x.unit(), x.prec());
    return u / teichmuller(x.p(), x.unit(), x.prec());
}

PadicNum principal_unit_rational(long p, const mpq_class& q, long prec) {
    return principal_unit(PadicNum::from_rational(p, q, prec));
}

DerivativeResult padic_derivative(const std::function<PadicNum(const mpz_class&)>& f,
                                  long p, long prec, long n_max, long slack) {
    DerivativeResult res;
    res.value = PadicNum(p, prec);
    const PadicNum f0 = f(0);
    for (long n = 1; n <= n_max; ++n) {
        PadicNum fn = f(ipow(p, n));
        PadicNum qn = (fn - f0).shift(-n);
        res.quotients.push_back(qn);
        if (n >= 2) {
            const PadicNum& prev = res.quotients[n - 2];
            PadicNum d = qn - prev;
            long need = (n - 1) - slack;
            if (!d.is_exact_zero() && d.val() < need) {
                if (d.is_zero()) {
                    res.message = "precision exhausted at step " + std::to_string(n);
                } else {
                    res.converged = false;
                    res.message = "non-convergence at step " + std::to_string(n);
                }
            }
        }
    }
    res.steps = n_max;
    res.value = res.quotients.back();
    return res;
}

}  // namespace muderiv
