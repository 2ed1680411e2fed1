#include "muderiv/local_analysis.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

namespace muderiv {

std::string factor_kind_str(FactorKind k) {
    switch (k) {
        case FactorKind::a_split: return "a_split";
        case FactorKind::a_unramified: return "a_unramified";
        case FactorKind::A_ramified: return "A_ramified";
        case FactorKind::A_inert: return "A_inert";
        case FactorKind::p_indicator: return "p_indicator";
        case FactorKind::constant: return "constant";
    }
    return "?";
}

mpq_class LocalFactor::rational_value() const {
    mpq_class s = 0;
    for (const auto& t : terms) s += t.coef;
    return s;
}

mpq_class LocalFactor::rational_derivative() const {
    mpq_class s = 0;
    for (const auto& t : terms) s += t.coef * t.e;
    return s;
}

ExactValue LocalFactor::value() const { return constant * ExactValue(rational_value()); }

ExactValue LocalFactor::derivative_coef() const {
    if (!has_derivative()) return ExactValue::zero();
    return constant * ExactValue(rational_derivative());
}

Valuation LocalFactor::derivative_val(long p, long prec) const {
    ExactValue d = derivative_coef();
    if (d.is_zero()) return Valuation::inf();
    PadicNum lg = iwasawa_log_rational(p, mpq_class(ell), prec);
    if (lg.is_zero()) throw std::runtime_error("derivative_val: log_p(ell) below precision");
    return d.valuation(p) + Valuation::of(lg.val());
}

PadicNum LocalFactor::rational_part_at(long p, const mpz_class& s, long prec) const {
    PadicNum acc(p, prec);
    PadicNum base = ell == 0 ? PadicNum::from_integer(p, 1, prec) : principal_unit_rational(p, mpq_class(1, ell), prec);
    for (const auto& t : terms) acc = acc + PadicNum::from_rational(p, t.coef, prec) * base.pow(mpz_class(t.e * s));
    return acc;
}

std::string LocalFactor::place_str() const {
    if (ell == 0) return "-";
    std::string k = kind == SplitKind::split ? "split" : (kind == SplitKind::inert ? "inert" : "ramified");
    return std::to_string(ell) + ":" + k;
}

LocalFactor constant_factor(const ExactValue& v, FactorKind fkind) {
    LocalFactor f;
    f.fkind = fkind;
    f.constant = v;
    f.want_derivative = false;
    return f;
}

int cond_exponent(const LocalChar& chi) {
    int a = 0;
    for (const auto& u : chi.unit_table)
        if (!u.value.is_one()) a = std::max(a, u.depth + 1);
    return a;
}

Valuation mu_p_local(const LocalChar& chi, const TeichmullerEmbedding& iota) {
    long p = iota.p();
    std::vector<RootOfUnity> vals;
    for (const auto& u : chi.unit_table) vals.push_back(u.value);
    if (vals.empty()) vals.push_back(RootOfUnity::one());
    RootOfUnity ur;
    mpq_class uc = 1;
    if (chi.uniformizer_value) {
        const ExactValue& w = *chi.uniformizer_value;
        if (w.radicand() != 1) throw std::invalid_argument("mu_p_local: uniformizer value not of the form r * zeta");
        if (vp_rational(w.coef(), p) != 0) throw std::invalid_argument("mu_p_local: uniformizer value not a p-adic unit");
        ur = w.root();
        uc = w.coef();
    }
    bool trivial = uc == 1 && ur.is_one();
    for (const auto& z : vals) trivial = trivial && z.is_one();
    if (trivial) return Valuation::inf();
    // powers of the uniformizer over a full period of the residues mod p and of the root part
    long M = lcm_l(p - 1, ur.order()) * p;
    if (uc * uc == 1) M = lcm_l(ur.order(), 2);
    Valuation best = Valuation::inf();
    for (long n = 0; n < M; ++n) {
        mpq_class c;
        mpz_pow_ui(c.get_num_mpz_t(), uc.get_num_mpz_t(), n);
        mpz_pow_ui(c.get_den_mpz_t(), uc.get_den_mpz_t(), n);
        c.canonicalize();
        RootOfUnity r = ur.pow(n);
        for (const auto& z : vals) {
            if (c == 1 && (r * z).is_one()) continue;
            best = min_val(best, val_root_minus_one(r * z, c, iota));
        }
        if (!best.infinite && best.value == 0) break;
    }
    return best;
}

Valuation mu_p_local(const LocalChar& chi, long p) { return mu_p_local(chi, TeichmullerEmbedding(p)); }

mpq_class lambda_prime_star(long n, int tau_value, int c) { return mpq_class(c * n * tau_value); }

LocalFactor whittaker_a(long ell, SplitKind kind, long n, int t) {
    if (t != 1 && t != -1) throw std::invalid_argument("whittaker_a: t must be +-1");
    LocalFactor f;
    f.ell = ell;
    f.kind = kind;
    f.fkind = kind == SplitKind::split ? FactorKind::a_split : FactorKind::a_unramified;
    f.terms.clear();
    long s = 1;
    for (long i = 0; i <= n; ++i) {
        f.terms.push_back({mpq_class(s), 2 * i});
        s *= t;
    }
    return f;
}

namespace {

int sign_of_uniformizer(const LocalChar& chi) {
    if (chi.cond_exp != 0) throw std::invalid_argument("whittaker_a: ramified character");
    if (chi.place.kind == SplitKind::split && !chi.uniformizer_value) return 1;
    if (!chi.uniformizer_value) throw std::invalid_argument("whittaker_a: no uniformizer value");
    const ExactValue& w = *chi.uniformizer_value;
    if (w == ExactValue(1)) return 1;
    if (w == ExactValue(-1)) return -1;
    throw std::invalid_argument("whittaker_a: uniformizer value of the star character must be +-1");
}

}  // namespace

LocalFactor whittaker_a(long n, const LocalChar& chi_star) {
    return whittaker_a(chi_star.place.ell, chi_star.place.kind, n, sign_of_uniformizer(chi_star));
}

LocalFactor whittaker_a_deriv(long n, const LocalChar& chi_star) {
    if (chi_star.place.kind == SplitKind::ramified) throw std::invalid_argument("whittaker_a_deriv: ramified place");
    return whittaker_a(n, chi_star);
}

EpsilonFactor eps_factor(const LocalChar& chi, long n_psi, long t) {
    if (!chi.f_level) throw std::invalid_argument("eps_factor: needs a character of F_v^x");
    int a = cond_exponent(chi);
    if (a == 0) throw std::invalid_argument("eps_factor: unramified character");
    if (a > chi.modulus_exp) throw std::invalid_argument("eps_factor: unit table too coarse");
    if (!chi.uniformizer_value || chi.uniformizer_value->radicand() != 1)
        throw std::invalid_argument("eps_factor: uniformizer value must be r * zeta");
    long ell = chi.place.ell;
    long m = 1;
    for (int i = 0; i < a; ++i) m *= ell;
    long N = lcm_l(4, m);
    std::map<long, RootOfUnity> table;
    for (const auto& u : chi.unit_table) {
        N = lcm_l(N, u.value.order());
        table[mod_l(static_cast<long>(u.residue.x), m)] = u.value;
    }
    const ExactValue& w = *chi.uniformizer_value;
    N = lcm_l(N, w.root().order());
    Cyclo S(N);
    for (long x = 1; x < m; ++x) {
        if (x % ell == 0) continue;
        auto it = table.find(x);
        if (it == table.end()) throw std::invalid_argument("eps_factor: unit table incomplete");
        S = S + Cyclo::root(N, it->second.inverse() * psi_local(ell, mpq_class(x, m)));
    }
    EpsilonFactor e;
    e.ell = ell;
    e.a = a;
    e.n_psi = n_psi;
    e.t = t;
    // chi_t(w)^a with chi_t = chi |.|^t, then the psi_n shift chi_t(ell^n) ell^n
    e.gauss = Cyclo::root(N, w.root().pow(a + n_psi)) * S;
    mpq_class sc = 1;
    mpq_class wc = t >= 0 ? mpq_class(w.coef() / mpq_class(ipow(ell, t))) : mpq_class(w.coef() * mpq_class(ipow(ell, -t)));
    for (long i = 0; i < a + n_psi; ++i) sc *= wc;
    for (long i = 0; i < n_psi; ++i) sc *= ell;
    e.scale = sc;
    return e;
}

std::optional<ExactValue> recognise_quadratic(const Cyclo& x_in, long ell) {
    long N = lcm_l(x_in.N(), 4 * ell);
    Cyclo x = x_in.lift(N);
    Cyclo nx = x * x.conj();
    if (!nx.is_rational()) return std::nullopt;
    mpq_class R = nx.rational_part();
    if (R == 0) return ExactValue::zero();
    for (long r : {1L, ell}) {
        mpq_class c2 = R / r;
        if (!mpz_perfect_square_p(c2.get_num_mpz_t()) || !mpz_perfect_square_p(c2.get_den_mpz_t())) continue;
        mpz_class cn, cd;
        mpz_sqrt(cn.get_mpz_t(), c2.get_num_mpz_t());
        mpz_sqrt(cd.get_mpz_t(), c2.get_den_mpz_t());
        mpq_class c(cn, cd);
        for (long j = 0; j < 4; ++j) {
            ExactValue cand(c, RootOfUnity(j, 4), r);
            Cyclo cc = Cyclo::root(lcm_l(N, 4), RootOfUnity(j, 4)) * c;
            if (r != 1) {
                if (r % 4 != 3 || N % (4 * r) != 0) continue;
                cc = cc * Cyclo::root(N, RootOfUnity(3, 4)) * Cyclo::sqrt_minus_q(N, r);
            }
            if (cc.lift(lcm_l(N, 4)) == x.lift(lcm_l(N, 4))) return cand;
        }
    }
    return std::nullopt;
}

PinnedEpsilon pin_epsilon(const QuadField& K, int s_q, long n_psi) {
    long q = K.disc() < 0 ? -K.disc() : K.disc();
    if (!is_prime(q)) throw std::invalid_argument("pin_epsilon: discriminant must be -q");
    LocalChar tau = make_f_level_char(q, SplitKind::ramified, 1,
                                      [&](long x) { return tau_local(K, q, mpq_class(x)) == 1 ? RootOfUnity::one() : RootOfUnity::minus_one(); },
                                      ExactValue(tau_local(K, q, mpq_class(q))));
    EpsilonFactor e = eps_factor(tau, n_psi, 1);
    auto raw = recognise_quadratic(e.value().lift(lcm_l(e.value().N(), 4 * q)), q);
    if (!raw) throw std::logic_error("pin_epsilon: epsilon is not of quadratic shape");
    ExactValue qh = ExactValue::sqrt(mpq_class(1, q));
    int tq = tau_local(K, q, mpq_class(q));
    int tm2 = tau_local(K, q, mpq_class(-2));
    std::vector<PinnedEpsilon> ok;
    for (long j = 0; j < 4; ++j) {
        ExactValue v = ExactValue::root(RootOfUnity(j, 4)) * *raw;
        ExactValue ratio = v / qh;
        if (!ratio.is_rational() || (ratio != ExactValue(1) && ratio != ExactValue(-1))) continue;
        int sigma = ratio == ExactValue(1) ? 1 : -1;
        bool good = true;
        for (int teta : {1, -1}) {
            bool cancels = tq + tm2 * teta * sigma == 0;
            good = good && (cancels == (teta * s_q == -1));
        }
        if (good) ok.push_back({q, *raw, RootOfUnity(j, 4), v, sigma});
    }
    if (ok.size() != 1) throw std::logic_error("pin_epsilon: kappa not unique (" + std::to_string(ok.size()) + ")");
    return ok[0];
}

LocalFactor whittaker_A_ramified(const QuadField& K, const mpq_class& eta, const PinnedEpsilon& eps) {
    long q = eps.q;
    if (eta == 0) throw std::invalid_argument("whittaker_A_ramified: eta = 0");
    long v = vp_rational(eta, q);
    if (v < -1) throw std::invalid_argument("whittaker_A_ramified: needs v(2 eta) >= -1");
    LocalFactor f;
    f.ell = q;
    f.kind = SplitKind::ramified;
    f.fkind = FactorKind::A_ramified;
    f.constant = ExactValue::sqrt(mpq_class(1, q));
    int tq = tau_local(K, q, mpq_class(q));
    int t2 = tau_local(K, q, -2 * eta);
    f.terms = {{mpq_class(tq), -2}, {mpq_class(t2 * eps.sigma), 2 * (v + 1)}};
    return f;
}

LocalFactor whittaker_A_inert(long ell, const mpq_class& eta, int t) {
    if (t != 1 && t != -1) throw std::invalid_argument("whittaker_A_inert: t must be +-1");
    if (eta == 0) throw std::invalid_argument("whittaker_A_inert: eta = 0");
    long v = vp_rational(2 * eta, ell);
    if (v < 0) throw std::invalid_argument("whittaker_A_inert: eta must be integral");
    LocalFactor f;
    f.ell = ell;
    f.kind = SplitKind::inert;
    f.fkind = FactorKind::A_inert;
    mpq_class w(1, ell);
    f.terms = {{-w, 0}};
    long s = 1;
    for (long j = 0; j <= v; ++j) {
        f.terms.push_back({mpq_class(s) * (1 - w), 2 * j});
        s *= t;
    }
    f.terms.push_back({-mpq_class(s) * w, 2 * (v + 1)});
    return f;
}

LocalFactor whittaker_A_deriv(const QuadField& K, const mpq_class& eta, const PinnedEpsilon& eps) {
    return whittaker_A_ramified(K, eta, eps);
}

LocalFactor whittaker_A_deriv(long ell, const mpq_class& eta, int t) { return whittaker_A_inert(ell, eta, t); }

LocalFactor p_indicator(long p, bool inside) {
    LocalFactor f = constant_factor(inside ? ExactValue::one() : ExactValue::zero(), FactorKind::p_indicator);
    f.kind = SplitKind::split;
    (void)p;
    return f;
}

std::string factors_csv(const std::vector<LocalFactor>& fs, long p) {
    std::ostringstream os;
    os << "place,kind,vp_value,vanished,vp_derivative\n";
    for (const auto& f : fs) {
        os << f.place_str() << "," << factor_kind_str(f.fkind) << "," << f.value_val(p).str() << ","
           << (f.vanished() ? "true" : "false") << ",";
        if (f.has_derivative()) os << f.derivative_val(p).str();
        os << "\n";
    }
    return os.str();
}

}  // namespace muderiv
