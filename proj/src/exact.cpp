#include "muderiv/exact.hpp"

#include <sstream>
#include <stdexcept>

namespace muderiv {

bool Valuation::operator==(const Valuation& o) const {
    if (infinite || o.infinite) return infinite == o.infinite;
    return value == o.value;
}

bool Valuation::operator<(const Valuation& o) const {
    if (infinite) return false;
    if (o.infinite) return true;
    return value < o.value;
}

Valuation Valuation::operator+(const Valuation& o) const {
    if (infinite || o.infinite) return inf();
    return of(value + o.value);
}

Valuation Valuation::operator-(const mpq_class& o) const {
    if (infinite) return inf();
    return of(value - o);
}

std::string Valuation::str() const {
    if (infinite) return "inf";
    mpq_class v = value;
    v.canonicalize();
    return v.get_str();
}

Valuation min_val(const Valuation& a, const Valuation& b) { return a < b ? a : b; }

namespace {

// n = s * t^2 with s squarefree
void squarefree_split(const mpz_class& n, mpz_class& s, mpz_class& t) {
    s = 1;
    t = 1;
    mpz_class m = n;
    for (mpz_class d = 2; d * d <= m; ++d) {
        long e = 0;
        while (m % d == 0) {
            m /= d;
            ++e;
        }
        for (long i = 0; i < e / 2; ++i) t *= d;
        if (e % 2 == 1) s *= d;
    }
    s *= m;
}

}  // namespace

ExactValue::ExactValue(const mpq_class& coef, const RootOfUnity& root, long radicand)
    : coef_(coef), root_(root), radicand_(radicand) {
    if (radicand <= 0) throw std::invalid_argument("ExactValue: radicand must be positive");
    coef_.canonicalize();
    normalise();
}

void ExactValue::normalise() {
    if (coef_ == 0) {
        root_ = RootOfUnity::one();
        radicand_ = 1;
        return;
    }
    mpz_class s, t;
    squarefree_split(radicand_, s, t);
    coef_ *= t;
    radicand_ = s.get_si();
    if (2 * root_.num() >= root_.den()) {
        root_ = root_ * RootOfUnity::minus_one();
        coef_ = -coef_;
    }
}

ExactValue ExactValue::sqrt(const mpq_class& q) {
    if (q <= 0) throw std::domain_error("ExactValue::sqrt: nonpositive");
    mpz_class ab = q.get_num() * q.get_den();
    mpz_class s, t;
    squarefree_split(ab, s, t);
    ExactValue r;
    r.coef_ = mpq_class(t, q.get_den());
    r.coef_.canonicalize();
    r.radicand_ = s.get_si();
    return r;
}

ExactValue ExactValue::operator*(const ExactValue& o) const {
    if (is_zero() || o.is_zero()) return zero();
    ExactValue r;
    r.coef_ = coef_ * o.coef_;
    r.root_ = root_ * o.root_;
    mpz_class s, t;
    squarefree_split(mpz_class(radicand_) * o.radicand_, s, t);
    r.coef_ *= t;
    r.radicand_ = s.get_si();
    r.normalise();
    return r;
}

ExactValue ExactValue::inverse() const {
    if (is_zero()) throw std::domain_error("ExactValue: inverse of zero");
    // 1/(c z sqrt(r)) = (1/(c r)) z^{-1} sqrt(r)
    ExactValue r;
    r.coef_ = 1 / (coef_ * radicand_);
    r.root_ = root_.inverse();
    r.radicand_ = radicand_;
    r.normalise();
    return r;
}

ExactValue ExactValue::operator/(const ExactValue& o) const { return *this * o.inverse(); }

ExactValue ExactValue::operator-() const {
    ExactValue r = *this;
    r.coef_ = -r.coef_;
    return r;
}

ExactValue ExactValue::operator+(const ExactValue& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (root_ != o.root_ || radicand_ != o.radicand_)
        throw std::domain_error("ExactValue: incompatible summands " + str() + " + " + o.str());
    ExactValue r = *this;
    r.coef_ += o.coef_;
    r.normalise();
    return r;
}

ExactValue ExactValue::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    ExactValue r = one(), b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

bool ExactValue::operator==(const ExactValue& o) const {
    return coef_ == o.coef_ && root_ == o.root_ && radicand_ == o.radicand_;
}

Valuation ExactValue::valuation(long p) const {
    if (is_zero()) return Valuation::inf();
    mpq_class v = vp_rational(coef_, p);
    if (radicand_ % p == 0) v += mpq_class(1, 2);
    return Valuation::of(v);
}

Complex ExactValue::to_complex() const {
    Real c = Real(coef_.get_num().get_str()) / Real(coef_.get_den().get_str());
    c *= boost::multiprecision::sqrt(Real(radicand_));
    return c * root_.to_complex();
}

std::string ExactValue::str() const {
    std::ostringstream os;
    os << coef_.get_str();
    if (!root_.is_one()) os << "*" << root_.str();
    if (radicand_ != 1) os << "*sqrt(" << radicand_ << ")";
    return os.str();
}

TeichmullerEmbedding::TeichmullerEmbedding(long p, long choice, long prec)
    : p_(p), choice_(choice), prec_(prec), g_(primitive_root(p)) {
    if (gcd_l(choice, p - 1) != 1) throw std::invalid_argument("TeichmullerEmbedding: choice must be prime to p-1");
    omega_g_ = teichmuller(p, g_, prec);
}

PadicNum TeichmullerEmbedding::operator()(const RootOfUnity& z) const {
    if (!embeds(z)) throw std::domain_error("TeichmullerEmbedding: order does not divide p-1");
    long e = mod_l(choice_ * z.num() * ((p_ - 1) / z.den()), p_ - 1);
    return omega_g_.pow(e);
}

Valuation val_root_minus_one(const RootOfUnity& z, const mpq_class& r, const TeichmullerEmbedding& iota) {
    const long p = iota.p();
    if (r == 0) return Valuation::of(0);
    if (z.is_one()) {
        if (r == 1) return Valuation::inf();
        return Valuation::of(vp_rational(r - 1, p));
    }
    long vr = vp_rational(r, p);
    if (vr > 0) return Valuation::of(0);
    if (vr < 0) return Valuation::of(vr);
    long m = z.order();
    long j = 0, pj = 1;
    while (m % (pj * p) == 0) {
        pj *= p;
        ++j;
    }
    long m0 = m / pj;
    // z0 = z^a with a = 1 mod m0, a = 0 mod p^j
    long a = 0;
    for (long t = 0; t < m0; ++t) {
        if (mod_l(t * pj, m0) == 1 % m0) {
            a = t * pj;
            break;
        }
    }
    RootOfUnity z0 = z.pow(a);
    Valuation base;
    if (m0 == 1) {
        base = r == 1 ? Valuation::inf() : Valuation::of(vp_rational(r - 1, p));
    } else if (m0 == 2) {
        base = r == -1 ? Valuation::inf() : Valuation::of(vp_rational(r + 1, p));
    } else if ((p - 1) % m0 == 0) {
        PadicNum x = PadicNum::from_rational(p, r) * iota(z0) - PadicNum::from_integer(p, 1);
        if (x.is_zero()) throw std::logic_error("val_root_minus_one: precision exhausted");
        base = Valuation::of(x.val());
    } else {
        base = Valuation::of(0);
    }
    if (j == 0) return base;
    mpz_class den = mpz_class(pj / p) * (p - 1);
    return min_val(Valuation::of(mpq_class(1, den)), base);
}

}  // namespace muderiv
