#include "muderiv/hecke_char.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace muderiv {

std::string Place::str() const { return std::to_string(ell) + ":" + to_string(kind) + ":" + std::to_string(which); }

Place place_of(const QuadField& K, long ell, int which) {
    PrimeSplit ps = classify_prime(K, ell);
    if (which < 0 || which >= static_cast<int>(ps.primes_above.size()))
        throw std::out_of_range("place_of: no such prime above " + std::to_string(ell));
    return {ell, ps.kind, which};
}

namespace {

using Fp2 = std::pair<long, long>;  // a + b*omega mod ell

Fp2 fp2_mul(const Fp2& u, const Fp2& v, long ell, long t, long n) {
    long long bd = static_cast<long long>(u.second) * v.second % ell;
    long long a = (static_cast<long long>(u.first) * v.first - n * bd) % ell;
    long long b = (static_cast<long long>(u.first) * v.second + static_cast<long long>(u.second) * v.first + t * bd) % ell;
    return {mod_l(static_cast<long>(a), ell), mod_l(static_cast<long>(b), ell)};
}

Fp2 fp2_pow(Fp2 u, long e, long ell, long t, long n) {
    Fp2 r{1, 0};
    while (e > 0) {
        if (e & 1) r = fp2_mul(r, u, ell, t, n);
        u = fp2_mul(u, u, ell, t, n);
        e >>= 1;
    }
    return r;
}

std::vector<long> build_inert_log(long ell, long t, long n) {
    long order = ell * ell - 1;
    auto factors = prime_factors(order);
    n = mod_l(n, ell);
    for (long a = 0; a < ell; ++a) {
        for (long b = 1; b < ell; ++b) {
            Fp2 g{a, b};
            bool gen = true;
            for (long r : factors)
                if (fp2_pow(g, order / r, ell, t, n) == Fp2{1, 0}) gen = false;
            if (!gen) continue;
            std::vector<long> log(ell * ell, -1);
            Fp2 x{1, 0};
            for (long i = 0; i < order; ++i) {
                log[x.first + x.second * ell] = i;
                x = fp2_mul(x, g, ell, t, n);
            }
            return log;
        }
    }
    throw std::logic_error("inert discrete log: no generator");
}

std::vector<long> build_split_log(long ell) {
    long g = primitive_root(ell);
    std::vector<long> log(ell, -1);
    long x = 1;
    for (long i = 0; i < ell - 1; ++i) {
        log[x] = i;
        x = static_cast<long>(static_cast<long long>(x) * g % ell);
    }
    return log;
}

long rem(long long v, long m) { return mod_l(static_cast<long>(v % m), m); }

}  // namespace

GlobalHeckeChar::GlobalHeckeChar(const QuadField& K, int k, std::vector<TwistComponent> twists)
    : K_(K), k_(k), twists_(std::move(twists)) {
    if (k <= 0 || k % 2 == 0)
        throw CharacterError("GlobalHeckeChar: no self-dual character of even weight with this conductor");
    q_ = -K.disc();
    if (K.trace_omega() != 1 || !is_prime(q_) || K.unit_count() != 2)
        throw CharacterError("GlobalHeckeChar: supported fields are Q(sqrt(-q)) with q > 3 prime, q = 3 mod 4");
    if (K.class_number() != 1) throw std::domain_error("GlobalHeckeChar: class number must be 1");
    level_ = lcm_l(q_, 2);
    PrimeSplit sq = classify_prime(K, q_);
    splits_.push_back(sq);
    conductor_.push_back({{q_, SplitKind::ramified, 0}, sq.primes_above[0], 1});
    std::vector<long> seen{q_};
    for (const auto& tw : twists_) {
        if (std::find(seen.begin(), seen.end(), tw.ell) != seen.end())
            throw std::invalid_argument("GlobalHeckeChar: repeated twist prime " + std::to_string(tw.ell));
        seen.push_back(tw.ell);
        if (!is_prime(tw.ell) || tw.ell == 2) throw std::invalid_argument("GlobalHeckeChar: twist prime must be odd");
        PrimeSplit ps = classify_prime(K, tw.ell);
        if (tw.type == TwistType::split) {
            if (ps.kind != SplitKind::split)
                throw std::invalid_argument("GlobalHeckeChar: " + std::to_string(tw.ell) + " is not split");
            long m = tw.ell - 1;
            if (mod_l(tw.j, m) == 0) throw std::invalid_argument("GlobalHeckeChar: trivial split twist");
            level_ = lcm_l(level_, m / gcd_l(mod_l(tw.j, m), m));
            split_log_[tw.ell] = build_split_log(tw.ell);
            conductor_.push_back({{tw.ell, SplitKind::split, 0}, ps.primes_above[0], 1});
            conductor_.push_back({{tw.ell, SplitKind::split, 1}, ps.primes_above[1], 1});
        } else {
            if (ps.kind != SplitKind::inert)
                throw std::invalid_argument("GlobalHeckeChar: " + std::to_string(tw.ell) + " is not inert");
            long m = tw.ell + 1;
            if (mod_l(tw.j, m) == 0) throw std::invalid_argument("GlobalHeckeChar: trivial inert twist");
            level_ = lcm_l(level_, m / gcd_l(mod_l(tw.j, m), m));
            inert_log_[tw.ell] = build_inert_log(tw.ell, K.trace_omega(), K.norm_omega());
            conductor_.push_back({{tw.ell, SplitKind::inert, 0}, ps.primes_above[0], 1});
        }
        splits_.push_back(ps);
    }
}

std::string GlobalHeckeChar::label() const {
    std::string s = twist_label(twists_);
    if (shift_ != 0) s += "*N^" + std::to_string(shift_);
    if (star_) s += "*star";
    if (conj_) s += "*conj";
    return s;
}

std::vector<ConductorPrime> GlobalHeckeChar::conductor_plus() const {
    std::vector<ConductorPrime> out;
    for (const auto& c : conductor_)
        if (c.place.kind == SplitKind::split) out.push_back(c);
    return out;
}

std::vector<ConductorPrime> GlobalHeckeChar::conductor_minus() const {
    std::vector<ConductorPrime> out;
    for (const auto& c : conductor_)
        if (c.place.kind != SplitKind::split) out.push_back(c);
    return out;
}

std::vector<ConductorPrime> GlobalHeckeChar::split_F() const {
    std::vector<ConductorPrime> out;
    for (const auto& c : conductor_plus())
        if (c.place.which == 0) out.push_back(c);
    return out;
}

std::vector<ConductorPrime> GlobalHeckeChar::split_Fc() const {
    std::vector<ConductorPrime> out;
    for (const auto& c : conductor_plus())
        if (c.place.which == 1) out.push_back(c);
    return out;
}

long GlobalHeckeChar::conductor_norm() const {
    long n = 1;
    for (const auto& c : conductor_) n *= c.place.kind == SplitKind::inert ? c.place.ell * c.place.ell : c.place.ell;
    return n;
}

const TwistComponent* GlobalHeckeChar::twist_at(long ell) const {
    for (const auto& t : twists_)
        if (t.ell == ell) return &t;
    return nullptr;
}

bool GlobalHeckeChar::coprime_to_conductor(const Elt& a) const {
    for (const auto& c : conductor_) {
        if (c.prime.residue_degree == 2) {
            if (a.x % c.place.ell == 0 && a.y % c.place.ell == 0) return false;
        } else if (K_.residue(a, c.prime) == 0) {
            return false;
        }
    }
    return true;
}

RootOfUnity GlobalHeckeChar::base_unit_value(const Place& w, const Elt& alpha) const {
    if (w.ell == q_) {
        long r = K_.residue(alpha, splits_[0].primes_above[0]);
        if (r == 0) throw std::domain_error("local unit value: not a unit at " + w.str());
        return legendre(r, q_) == 1 ? RootOfUnity::one() : RootOfUnity::minus_one();
    }
    const TwistComponent* tw = twist_at(w.ell);
    if (!tw) return RootOfUnity::one();
    PrimeSplit ps = classify_prime(K_, w.ell);
    if (tw->type == TwistType::split) {
        long r = K_.residue(alpha, ps.primes_above.at(w.which));
        if (r == 0) throw std::domain_error("local unit value: not a unit at " + w.str());
        long e = tw->j * split_log_.at(w.ell)[r];
        RootOfUnity v(mod_l(e, w.ell - 1), w.ell - 1);
        return w.which == 0 ? v : v.inverse();
    }
    long a = rem(alpha.x, w.ell), b = rem(alpha.y, w.ell);
    if (a == 0 && b == 0) throw std::domain_error("local unit value: not a unit at " + w.str());
    long e = tw->j * inert_log_.at(w.ell)[a + b * w.ell];
    return RootOfUnity(mod_l(e, w.ell + 1), w.ell + 1);
}

RootOfUnity GlobalHeckeChar::local_unit_value(const Place& w, const Elt& alpha) const {
    if (!conj_) return base_unit_value(w, alpha);
    Place wb = w;
    if (w.kind == SplitKind::split) wb.which = 1 - w.which;
    return base_unit_value(wb, K_.conj(alpha));
}

RootOfUnity GlobalHeckeChar::epsilon(const Elt& alpha) const {
    if (!coprime_to_conductor(alpha)) throw std::domain_error("epsilon: argument not prime to the conductor");
    RootOfUnity r;
    for (const auto& c : conductor_) r = r * local_unit_value(c.place, alpha);
    return r;
}

Cyclo GlobalHeckeChar::value(const Elt& alpha) const {
    if (star_) throw std::domain_error("GlobalHeckeChar::value: unitary form has no exact cyclotomic value");
    Elt a = conj_ ? K_.conj(alpha) : alpha;
    Cyclo v = Cyclo::root(level_, epsilon(alpha)) * K_.embed(a, level_).pow(k_);
    mpq_class nrm(mpz_class(std::to_string(K_.norm(alpha))));
    mpq_class f = 1;
    for (long i = 0; i < std::labs(shift_); ++i) f *= nrm;
    if (shift_ < 0) f = 1 / f;
    return v * f;
}

Complex GlobalHeckeChar::value_complex(const Elt& alpha) const {
    Elt a = conj_ ? K_.conj(alpha) : alpha;
    Complex z = K_.to_complex(a);
    Complex v = epsilon(alpha).to_complex();
    for (int i = 0; i < k_; ++i) v *= z;
    Real nrm = Real(K_.norm(alpha));
    v *= boost::multiprecision::pow(nrm, Real(shift_));
    if (star_) v /= boost::multiprecision::pow(nrm, Real(k_) / 2);
    return v;
}

Cyclo GlobalHeckeChar::ideal_value(const IdealRep& I) const {
    Elt g = K_.ideal_generator(I);
    if (!coprime_to_conductor(g)) return Cyclo(level_);
    return value(g);
}

Complex GlobalHeckeChar::ideal_value_complex(const IdealRep& I) const {
    Elt g = K_.ideal_generator(I);
    if (!coprime_to_conductor(g)) return Complex(0);
    return value_complex(g);
}

GlobalHeckeChar GlobalHeckeChar::with_norm_shift(long s) const {
    GlobalHeckeChar r = *this;
    r.shift_ = s;
    return r;
}

GlobalHeckeChar GlobalHeckeChar::star() const {
    GlobalHeckeChar r = *this;
    r.star_ = true;
    return r;
}

GlobalHeckeChar GlobalHeckeChar::conjugate() const {
    GlobalHeckeChar r = *this;
    r.conj_ = !conj_;
    return r;
}

}  // namespace muderiv

namespace muderiv {

std::vector<TwistComponent> parse_twist_label(const std::string& label) {
    std::vector<TwistComponent> out;
    std::stringstream ss(label);
    std::string tok;
    while (std::getline(ss, tok, '+')) {
        if (tok.empty() || tok == "canonical") continue;
        std::vector<std::string> parts;
        std::stringstream ts(tok);
        std::string p;
        while (std::getline(ts, p, ':')) parts.push_back(p);
        if (parts.size() < 2 || parts.size() > 3 || (parts[0] != "split" && parts[0] != "inert"))
            throw CharacterError("bad twist label component '" + tok + "'");
        TwistComponent t;
        t.type = parts[0] == "split" ? TwistType::split : TwistType::inert;
        try {
            t.ell = std::stol(parts[1]);
            t.j = parts.size() == 3 ? std::stol(parts[2]) : 1;
        } catch (const std::exception&) {
            throw CharacterError("bad twist label component '" + tok + "'");
        }
        out.push_back(t);
    }
    return out;
}

std::string twist_label(const std::vector<TwistComponent>& twists) {
    std::string s = "canonical";
    for (const auto& t : twists)
        s += std::string("+") + (t.type == TwistType::split ? "split:" : "inert:") + std::to_string(t.ell) + ":" +
             std::to_string(t.j);
    return s;
}

GlobalHeckeChar build_selfdual_char(const QuadField& K, int k, const std::vector<std::pair<long, int>>& conductor,
                                    const std::string& label) {
    if (k <= 0 || k % 2 == 0) throw CharacterError("no self-dual character of weight " + std::to_string(k));
    long q = -K.disc();
    std::map<long, int> want;
    for (const auto& [ell, e] : conductor) {
        if (ell == 1) continue;
        if (e <= 0) continue;
        want[ell] += e;
    }
    auto describe = [&]() {
        std::string s = "(";
        bool first = true;
        for (const auto& [ell, e] : want) {
            s += (first ? "" : ",") + std::to_string(ell) + "^" + std::to_string(e);
            first = false;
        }
        return s + ")";
    };
    if (!want.count(q) || want[q] != 1)
        throw CharacterError("no self-dual character with conductor " + describe() +
                             ": the finite part must ramify exactly at sqrt(-" + std::to_string(q) + ")");
    std::vector<TwistComponent> twists;
    if (label.empty()) {
        for (const auto& [ell, e] : want) {
            if (ell == q) continue;
            if (e != 1) throw CharacterError("no self-dual character with conductor " + describe());
            PrimeSplit ps = classify_prime(K, ell);
            if (ps.kind == SplitKind::split) twists.push_back({TwistType::split, ell, (ell - 1) / 2});
            else if (ps.kind == SplitKind::inert) twists.push_back({TwistType::inert, ell, (ell + 1) / 2});
            else throw CharacterError("no self-dual character with conductor " + describe());
        }
    } else {
        twists = parse_twist_label(label);
        std::map<long, int> have{{q, 1}};
        for (const auto& t : twists) have[t.ell] = 1;
        if (have != want)
            throw CharacterError("twist label '" + label + "' does not have conductor " + describe());
    }
    try {
        return GlobalHeckeChar(K, k, twists);
    } catch (const std::invalid_argument& e) {
        throw CharacterError(e.what());
    }
}

ExactValue f_uniformizer_value(const GlobalHeckeChar& lambda, long ell) {
    RootOfUnity r;
    for (const auto& c : lambda.conductor())
        if (c.place.ell != ell) r = r * lambda.local_unit_value(c.place, Elt{ell, 0});
    long e = (lambda.is_star() ? 0 : lambda.weight()) + 2 * lambda.norm_shift();
    mpq_class v = 1;
    for (long i = 0; i < std::labs(e); ++i) v *= ell;
    if (e > 0) v = 1 / v;
    return ExactValue(v, r.inverse());
}

namespace {

int compute_cond_exp(const std::vector<UnitEntry>& table) {
    int a = 0;
    for (const auto& u : table)
        if (!u.value.is_one()) a = std::max(a, u.depth + 1);
    return a;
}

}  // namespace

LocalChar make_f_level_char(long ell, SplitKind kind, int e, const std::function<RootOfUnity(long)>& chi,
                            std::optional<ExactValue> uniformizer_value) {
    LocalChar lc;
    lc.place = {ell, kind, 0};
    lc.f_level = true;
    lc.modulus_exp = e;
    lc.uniformizer_value = std::move(uniformizer_value);
    long m = 1;
    for (int i = 0; i < e; ++i) m *= ell;
    for (long r = 1; r < m; ++r) {
        if (r % ell == 0) continue;
        int depth = 0;
        long d = r - 1;
        if (d == 0) depth = e;
        else
            while (d % ell == 0 && depth < e) {
                d /= ell;
                ++depth;
            }
        lc.unit_table.push_back({Elt{r, 0}, depth, chi(r)});
    }
    lc.cond_exp = compute_cond_exp(lc.unit_table);
    return lc;
}

LocalChar local_component(const GlobalHeckeChar& lambda, const Place& w) {
    const QuadField& K = lambda.field();
    LocalChar lc;
    lc.place = w;
    lc.modulus_exp = 1;
    long ell = w.ell;
    if (w.kind == SplitKind::inert) {
        for (long b = 0; b < ell; ++b)
            for (long a = 0; a < ell; ++a) {
                if (a == 0 && b == 0) continue;
                Elt u{a, b};
                lc.unit_table.push_back({u, (a == 1 && b == 0) ? 1 : 0, lambda.local_unit_value(w, u)});
            }
    } else {
        for (long r = 1; r < ell; ++r) {
            Elt u{r, 0};
            lc.unit_table.push_back({u, r == 1 ? 1 : 0, lambda.local_unit_value(w, u)});
        }
    }
    lc.cond_exp = compute_cond_exp(lc.unit_table);
    if (w.kind != SplitKind::split) lc.uniformizer_value = f_uniformizer_value(lambda, ell);
    (void)K;
    return lc;
}

LocalChar restrict_to_F(const LocalChar& chi) {
    LocalChar r = chi;
    r.f_level = true;
    r.unit_table.clear();
    for (const auto& u : chi.unit_table)
        if (u.residue.y == 0) r.unit_table.push_back(u);
    r.cond_exp = compute_cond_exp(r.unit_table);
    if (chi.place.kind == SplitKind::split) r.uniformizer_value.reset();
    return r;
}

GlobalHeckeChar lambda_star(const GlobalHeckeChar& lambda) { return lambda.star(); }

GlobalHeckeChar twist_by_norm(const GlobalHeckeChar& lambda, long s) {
    if (s < 0) throw std::invalid_argument("twist_by_norm: s must be nonnegative");
    return lambda.with_norm_shift(lambda.norm_shift() + s);
}

namespace {

// Hilbert symbol (a, b)_ell for nonzero integers
int hilbert(mpz_class a, mpz_class b, long ell) {
    long alpha = 0, beta = 0;
    while (a % ell == 0) {
        a /= ell;
        ++alpha;
    }
    while (b % ell == 0) {
        b /= ell;
        ++beta;
    }
    if (ell == 2) {
        long u = mod_l(static_cast<long>(mpz_class(a % 8).get_si()), 8);
        long v = mod_l(static_cast<long>(mpz_class(b % 8).get_si()), 8);
        auto eps = [](long x) { return ((x - 1) / 2) % 2; };
        auto om = [](long x) { return ((x * x - 1) / 8) % 2; };
        long e = eps(u) * eps(v) + alpha * om(v) + beta * om(u);
        return e % 2 == 0 ? 1 : -1;
    }
    long u = mod_l(static_cast<long>(mpz_class(a % ell).get_si()), ell);
    long v = mod_l(static_cast<long>(mpz_class(b % ell).get_si()), ell);
    int s = 1;
    if ((alpha * beta) % 2 == 1 && (ell % 4) == 3) s = -s;
    if (beta % 2 == 1) s *= static_cast<int>(legendre(u, ell));
    if (alpha % 2 == 1) s *= static_cast<int>(legendre(v, ell));
    return s;
}

}  // namespace

int tau_local(const QuadField& K, long ell, const mpq_class& x) {
    if (x == 0) throw std::domain_error("tau_local: zero");
    return hilbert(x.get_num() * x.get_den(), mpz_class(K.disc()), ell);
}

bool restriction_is_tau(const GlobalHeckeChar& lambda, const Place& w) {
    GlobalHeckeChar ls = lambda.star().with_norm_shift(0);
    const QuadField& K = lambda.field();
    long ell = w.ell;
    ExactValue u = f_uniformizer_value(ls, ell);
    if (u != ExactValue(tau_local(K, ell, mpq_class(ell)))) return false;
    long top = ell == 2 ? 8 : ell;
    PrimeSplit ps = classify_prime(K, ell);
    for (long r = 1; r < top; ++r) {
        if (r % ell == 0) continue;
        RootOfUnity v;
        for (int i = 0; i < static_cast<int>(ps.primes_above.size()); ++i)
            v = v * ls.local_unit_value({ell, ps.kind, i}, Elt{r, 0});
        RootOfUnity t = tau_local(K, ell, mpq_class(r)) == 1 ? RootOfUnity::one() : RootOfUnity::minus_one();
        if (v != t) return false;
    }
    return true;
}

}  // namespace muderiv
