#include "muderiv/fourier_mu.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <thread>

namespace muderiv {

std::string refusal_str(Refusal r) {
    switch (r) {
        case Refusal::none: return "none";
        case Refusal::ord: return "HYPOTHESIS_ORD";
        case Refusal::class_number: return "HYPOTHESIS_CLASS";
        case Refusal::root_number: return "ROOT_NUMBER";
        case Refusal::character: return "CHARACTER";
        case Refusal::unsupported: return "UNSUPPORTED";
    }
    return "?";
}

Refusal Hypotheses::first_failure() const {
    if (!p_odd_prime) return Refusal::unsupported;
    if (!p_split) return Refusal::ord;
    if (!p_ndvd_h) return Refusal::class_number;
    if (!p_ndvd_units || !p_ndvd_conductor || !minus_part_supported) return Refusal::unsupported;
    if (W != -1) return Refusal::root_number;
    return Refusal::none;
}

Hypotheses check_hypotheses(const GlobalHeckeChar& lam, long p) {
    Hypotheses h;
    const QuadField& K = lam.field();
    h.p_odd_prime = p > 2 && is_prime(p);
    if (!h.p_odd_prime) return h;
    h.p_split = classify_prime(K, p).kind == SplitKind::split;
    h.p_ndvd_h = K.class_number() % p != 0;
    h.p_ndvd_units = 2 % p != 0;
    h.p_ndvd_conductor = true;
    h.minus_part_supported = true;
    for (const auto& c : lam.conductor()) {
        if (c.place.ell == p) h.p_ndvd_conductor = false;
        if (c.place.kind == SplitKind::inert) h.minus_part_supported = false;
    }
    h.W = global_root_number(lam);
    return h;
}

long d0_class(const mpq_class& beta, long p) {
    if (vp_rational(beta, p) != 0) return 0;
    long n = mod_l(static_cast<long>(mpz_class(beta.get_num() % p).get_si()), p);
    long d = mod_l(static_cast<long>(mpz_class(beta.get_den() % p).get_si()), p);
    long a = n * invmod(d, p) % p;
    return std::min(a, p - a);
}

int CoefficientAssembly::vanished_count() const {
    int c = 0;
    for (const auto& f : factors) c += f.vanished();
    return c;
}

bool CoefficientAssembly::deriv_is_zero() const {
    for (const auto& t : deriv_terms)
        if (!t.coef.is_zero()) return false;
    return true;
}

Valuation CoefficientAssembly::deriv_val(long p, long prec) const {
    std::vector<LogTerm> nz;
    for (const auto& t : deriv_terms)
        if (!t.coef.is_zero()) nz.push_back(t);
    if (nz.empty()) return Valuation::inf();
    if (nz.size() == 1)
        return nz[0].coef.valuation(p) + Valuation::of(iwasawa_log_rational(p, mpq_class(nz[0].ell), prec).val());
    PadicNum acc(p, prec);
    for (const auto& t : nz) {
        if (!t.coef.is_rational()) throw std::runtime_error("deriv_val: several non-rational derivative terms");
        acc = acc - PadicNum::from_rational(p, t.coef.coef(), prec) * iwasawa_log_rational(p, mpq_class(t.ell), prec);
    }
    if (acc.is_zero()) return Valuation::inf();
    return Valuation::of(acc.val());
}

Valuation CoefficientAssembly::normalized_val(long p, long prec) const {
    Valuation v = deriv_val(p, prec);
    if (v.infinite) return v;
    return v - mpq_class(iwasawa_log_rational(p, mpq_class(1 + p), prec).val());
}

ExactValue CoefficientAssembly::constant_product() const {
    ExactValue c = ExactValue::one();
    for (const auto& f : factors) c = c * f.constant;
    return c;
}

PadicNum CoefficientAssembly::rational_product_at(long p, const mpz_class& s, long prec) const {
    PadicNum acc = PadicNum::from_integer(p, 1, prec);
    for (const auto& f : factors) acc = acc * f.rational_part_at(p, s, prec);
    return acc;
}

PadicNum CoefficientAssembly::rational_derivative_padic(long p, long prec) const {
    PadicNum acc(p, prec);
    for (size_t i = 0; i < factors.size(); ++i) {
        const auto& fi = factors[i];
        if (!fi.has_derivative()) continue;
        PadicNum term = PadicNum::from_rational(p, fi.rational_derivative(), prec) *
                        iwasawa_log_rational(p, mpq_class(1, fi.ell), prec);
        for (size_t j = 0; j < factors.size(); ++j)
            if (j != i) term = term * PadicNum::from_rational(p, factors[j].rational_value(), prec);
        acc = acc + term;
    }
    return acc;
}

AssemblyContext::AssemblyContext(const GlobalHeckeChar& l, long p_)
    : lam(l), p(p_), q(l.q()), roots(root_number_data(l)), eps(pin_epsilon(l.field(), roots.sign_at(l.q()))) {
    for (const auto& c : lam.split_F()) split_F.push_back(c.place);
    for (const auto& c : lam.conductor()) conductor_ells.push_back(c.place.ell);
    std::sort(conductor_ells.begin(), conductor_ells.end());
    conductor_ells.erase(std::unique(conductor_ells.begin(), conductor_ells.end()), conductor_ells.end());
}

namespace {

std::vector<long> primes_of(const mpq_class& x) {
    std::vector<long> r;
    for (long l : prime_factors(mpz_class(abs(x.get_num())).get_si())) r.push_back(l);
    for (long l : prime_factors(x.get_den().get_si())) r.push_back(l);
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
}

mpq_class qpow(const mpq_class& b, long e) {
    mpq_class r = 1;
    for (long i = 0; i < std::abs(e); ++i) r *= b;
    return e < 0 ? mpq_class(1 / r) : r;
}

LocalFactor zero_factor(SplitKind kind) {
    LocalFactor f = constant_factor(ExactValue::zero());
    f.kind = kind;
    return f;
}

}  // namespace

CoefficientAssembly assemble_coefficient(const AssemblyContext& ctx, AssemblyMode mode, const mpq_class& beta, long u,
                                         const std::map<long, long>& cmap) {
    if (beta <= 0) throw std::invalid_argument("assemble_coefficient: beta must be positive");
    const GlobalHeckeChar& lam = ctx.lam;
    const QuadField& K = lam.field();
    long p = ctx.p, q = ctx.q;
    for (long ell : ctx.conductor_ells)
        if (ell != q && classify_prime(K, ell).kind != SplitKind::split)
            throw HypothesisError(Refusal::unsupported, "assemble_coefficient: inert place in the conductor");
    CoefficientAssembly a;
    a.beta = beta;
    a.u = u;
    a.cmap = cmap;
    auto fail = [&](const std::string& why) {
        if (a.in_support) a.reason = why;
        a.in_support = false;
    };

    a.factors.push_back(constant_factor(ExactValue(qpow(beta, lam.weight() - 1))));

    bool at_p = vp_rational(beta, p) == 0 && d0_class(beta, p) == u;
    a.factors.push_back(p_indicator(p, at_p));
    if (!at_p) fail("p-indicator");

    for (const Place& w : ctx.split_F) {
        long ell = w.ell;
        if (vp_rational(beta, ell) != 0) {
            a.factors.push_back(zero_factor(SplitKind::split));
            fail("not prime to F at " + std::to_string(ell));
            continue;
        }
        RootOfUnity z = lam.local_unit_value(w, Elt{mpz_class(beta.get_num() % ell).get_si(), 0});
        z = z * lam.local_unit_value(w, Elt{mpz_class(beta.get_den() % ell).get_si(), 0}).inverse();
        a.factors.push_back(constant_factor(ExactValue::root(z)));
    }

    std::set<long> ells;
    for (long l : primes_of(beta)) ells.insert(l);
    for (const auto& [l, e] : cmap)
        if (e != 0) ells.insert(l);
    for (long ell : ells) {
        if (ell == p || ell == q || std::binary_search(ctx.conductor_ells.begin(), ctx.conductor_ells.end(), ell)) continue;
        long n = vp_rational(beta, ell) + (cmap.count(ell) ? cmap.at(ell) : 0);
        SplitKind kind = classify_prime(K, ell).kind;
        a.factors.push_back(whittaker_a(ell, kind, n, tau_local(K, ell, mpq_class(ell))));
        if (n < 0) fail("negative valuation at " + std::to_string(ell));
    }

    if (cmap.count(q) && cmap.at(q) != 0) throw std::invalid_argument("assemble_coefficient: c_q must be a unit");
    a.factors.push_back(whittaker_A_ramified(K, beta, ctx.eps));

    a.total = ExactValue::one();
    for (const auto& f : a.factors) a.total = a.total * f.value();

    if (mode == AssemblyMode::derivative) {
        for (size_t i = 0; i < a.factors.size(); ++i) {
            const auto& fi = a.factors[i];
            if (!fi.has_derivative()) continue;
            ExactValue d = fi.derivative_coef();
            if (d.is_zero()) continue;
            for (size_t j = 0; j < a.factors.size() && !d.is_zero(); ++j)
                if (j != i) d = d * a.factors[j].value();
            if (!d.is_zero()) a.deriv_terms.push_back({d, fi.ell});
        }
    }
    return a;
}

VanishingWitness vanishing_witness(const AssemblyContext& ctx, const mpq_class& beta, const std::map<long, long>& cmap) {
    const QuadField& K = ctx.lam.field();
    std::set<long> ells(ctx.conductor_ells.begin(), ctx.conductor_ells.end());
    ells.insert(ctx.q);
    for (long l : primes_of(beta)) ells.insert(l);
    for (const auto& [l, e] : cmap) ells.insert(l);
    for (long ell : ells) {
        SplitKind kind = classify_prime(K, ell).kind;
        if (kind == SplitKind::split) continue;
        if (ctx.roots.sign_at(ell) * tau_local(K, ell, beta) != -1) continue;
        bool in_c = std::binary_search(ctx.conductor_ells.begin(), ctx.conductor_ells.end(), ell);
        VanishingWitness w{ell, kind, in_c ? 1 : 2};
        if (!in_c) {
            long n = vp_rational(beta, ell) + (cmap.count(ell) ? cmap.at(ell) : 0);
            if (n % 2 == 0) throw std::logic_error("vanishing_witness: case II place with even valuation");
        }
        return w;
    }
    throw std::logic_error("vanishing_witness: no place with W_v tau_v(beta) = -lambda*_v(xi)");
}

RhsResult rhs_from_ledger(std::vector<LedgerEntry> ledger) {
    if (ledger.empty()) throw std::invalid_argument("mu_formula_rhs: empty conductor minus part");
    RhsResult r;
    r.ledger = std::move(ledger);
    for (const auto& e : r.ledger) {
        if (e.mu.infinite) throw std::logic_error("mu_formula_rhs: trivial local component in the conductor");
        r.mu_prime += e.mu.value;
    }
    r.rhs = r.mu_prime;
    for (auto& e : r.ledger) {
        e.mu_prime_v = e.log_ratio + r.mu_prime - e.mu.value;
        r.rhs = std::min(r.rhs, e.mu_prime_v);
    }
    return r;
}

RhsResult mu_formula_rhs(const GlobalHeckeChar& lam, long p) {
    TeichmullerEmbedding iota(p);
    long vp1 = iwasawa_log_rational(p, mpq_class(1 + p)).val();
    std::vector<LedgerEntry> ledger;
    for (const auto& c : lam.conductor_minus()) {
        LedgerEntry e;
        e.ell = c.place.ell;
        e.kind = c.place.kind;
        e.mu = mu_p_local(local_component(lam, c.place), iota);
        e.vp_log = iwasawa_log_rational(p, mpq_class(e.ell)).val();
        e.log_ratio = e.vp_log - vp1;
        ledger.push_back(e);
    }
    return rhs_from_ledger(std::move(ledger));
}

std::optional<LocalWitness> local_floor_witness(const AssemblyContext& ctx, long ell, long search) {
    if (ell != ctx.q) throw HypothesisError(Refusal::unsupported, "local witness: only the ramified place is supported");
    LocalWitness w;
    w.ell = ell;
    w.mu = mu_p_local(local_component(ctx.lam, place_of(ctx.lam.field(), ell)), ctx.p);
    for (long m = 1; m <= search; ++m) {
        if (m % ell == 0) continue;
        for (long e : {0L, -1L, 1L}) {
            mpq_class eta = mpq_class(m) * (e >= 0 ? mpq_class(e ? ell : 1) : mpq_class(1, ell));
            eta.canonicalize();
            Valuation v = whittaker_A_ramified(ctx.lam.field(), eta, ctx.eps).value_val(ctx.p);
            if (v == w.mu) {
                w.eta = eta;
                w.achieved = v;
                return w;
            }
        }
    }
    return std::nullopt;
}

namespace {

int thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* s = std::getenv("MU_DERIV_THREADS")) {
        int n = std::atoi(s);
        if (n > 0) return n;
    }
    unsigned h = std::thread::hardware_concurrency();
    return h == 0 ? 1 : static_cast<int>(h);
}

struct PointResult {
    mpq_class beta;
    long numerator = 0;
    long u = 0;
    bool support = false;
    bool total_zero = true;
    bool single = true;
    bool floor_ok = true;
    Valuation val;
};

}  // namespace

GridResult brute_force_mu(const AssemblyContext& ctx, long bound, int threads) {
    std::vector<std::pair<long, mpq_class>> pts;
    for (long n = 1; n <= bound; ++n) {
        pts.push_back({n, mpq_class(n)});
        if (n % ctx.q != 0) pts.push_back({n, mpq_class(n, ctx.q)});
    }
    Valuation mu_q = mu_p_local(local_component(ctx.lam, place_of(ctx.lam.field(), ctx.q)), ctx.p);
    std::vector<PointResult> res(pts.size());
    auto work = [&](size_t lo, size_t hi) {
        for (size_t i = lo; i < hi; ++i) {
            PointResult& r = res[i];
            r.beta = pts[i].second;
            r.numerator = pts[i].first;
            r.u = d0_class(r.beta, ctx.p);
            if (r.u == 0) continue;
            CoefficientAssembly a = assemble_coefficient(ctx, AssemblyMode::derivative, r.beta, r.u);
            r.support = a.in_support;
            r.total_zero = a.total.is_zero();
            r.val = a.normalized_val(ctx.p);
            r.single = r.val.infinite || a.vanished_count() == 1;
            for (const auto& f : a.factors)
                if (f.fkind == FactorKind::A_ramified && !(mu_q <= f.value_val(ctx.p))) r.floor_ok = false;
        }
    };
    int nt = std::max(1, std::min<int>(thread_count(threads), static_cast<int>(pts.size() / 64 + 1)));
    std::vector<std::thread> pool;
    size_t chunk = (pts.size() + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        size_t lo = t * chunk, hi = std::min(pts.size(), lo + chunk);
        if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();

    GridResult g;
    g.bound = bound;
    for (const auto& r : res) {
        ++g.evaluated;
        if (!r.support) continue;
        ++g.in_support;
        g.all_totals_vanish = g.all_totals_vanish && r.total_zero;
        g.single_vanishing = g.single_vanishing && r.single;
        g.floors_hold = g.floors_hold && r.floor_ok;
        if (r.val.infinite) continue;
        GridPoint gp{r.beta, r.u, r.val};
        if (!g.argmin || r.val < g.argmin->val) g.argmin = gp;
        if (2 * r.numerator <= bound && (!g.argmin_half || r.val < g.argmin_half->val)) g.argmin_half = gp;
    }
    return g;
}

bool lemma_congruence(long q1, long p) {
    for (long a = 1; a < p; ++a)
        if (mod_l(q1, p) == a && mod_l(q1, p * p) != a) return true;
    return false;
}

long find_aux_prime(const QuadField& K, long p, const std::vector<long>& avoid, long limit) {
    for (long ell = 3; ell < limit; ++ell) {
        if (!is_prime(ell) || std::find(avoid.begin(), avoid.end(), ell) != avoid.end()) continue;
        if (classify_prime(K, ell).kind != SplitKind::inert) continue;
        if (iwasawa_log_rational(p, mpq_class(ell)).val() == 1) return ell;
    }
    throw std::runtime_error("find_aux_prime: search bound exhausted");
}

Witness construct_witness(const AssemblyContext& ctx, WitnessTarget target, long place, long search_limit) {
    RhsResult rhs = mu_formula_rhs(ctx.lam, ctx.p);
    Witness w;
    w.target = target;
    auto accept = [&](const mpq_class& beta, long vanish_ell) -> bool {
        long u = d0_class(beta, ctx.p);
        if (u == 0) return false;
        CoefficientAssembly a = assemble_coefficient(ctx, AssemblyMode::derivative, beta, u);
        if (!a.in_support || a.vanished_count() != 1) return false;
        Valuation v = a.normalized_val(ctx.p);
        if (v.infinite || v.value != w.expected) return false;
        VanishingWitness vw = vanishing_witness(ctx, beta);
        if (vw.ell != vanish_ell) return false;
        w.beta = beta;
        w.u = u;
        w.achieved = v;
        w.vanishing = vw;
        return true;
    };
    if (target == WitnessTarget::global) {
        std::vector<long> avoid(ctx.conductor_ells.begin(), ctx.conductor_ells.end());
        avoid.push_back(ctx.p);
        avoid.push_back(ctx.q);
        w.aux_prime = find_aux_prime(ctx.lam.field(), ctx.p, avoid);
        w.expected = rhs.mu_prime;
        for (long m = 1; m < search_limit; ++m) {
            if (m % w.aux_prime == 0) continue;
            if (accept(mpq_class(w.aux_prime * m), w.aux_prime)) return w;
        }
        throw std::runtime_error("construct_witness: global search bound exhausted");
    }
    if (place == 0) place = ctx.q;
    if (place != ctx.q) throw std::invalid_argument("construct_witness: place target must be the ramified place");
    w.place = place;
    for (const auto& e : rhs.ledger)
        if (e.ell == place) w.expected = e.mu_prime_v;
    for (long m = 1; m < search_limit; ++m) {
        if (m % place == 0) continue;
        for (long e : {-1L, 0L, 1L, 2L})
            if (accept(mpq_class(m) * qpow(mpq_class(place), e), place)) return w;
    }
    throw std::runtime_error("construct_witness: place search bound exhausted");
}

MuCertificate verify_theorem_a(const GlobalHeckeChar& lam, long p, long bound, long precision, int threads) {
    MuCertificate c;
    c.label = lam.label();
    c.d = lam.q();
    c.p = p;
    c.k = lam.weight();
    c.precision = precision;
    c.hyp = check_hypotheses(lam, p);
    Refusal r = c.hyp.first_failure();
    if (r != Refusal::none) throw HypothesisError(r, "verify: hypothesis " + refusal_str(r) + " fails");
    AssemblyContext ctx(lam, p);
    c.roots = ctx.roots;
    c.eps = ctx.eps;
    c.rhs = mu_formula_rhs(lam, p);
    c.grid = brute_force_mu(ctx, 2 * bound, threads);
    c.grid.bound = 2 * bound;
    mpq_class rhs = c.rhs.rhs;
    auto fail = [&](const std::string& s) { c.failures.push_back(s); };
    if (c.grid.in_support == 0) fail("grid: empty support");
    if (!c.grid.all_totals_vanish) fail("vanishing: a grid coefficient of E_lambda is nonzero");
    if (!c.grid.single_vanishing) fail("leibniz: nonzero derivative with more than one vanishing factor");
    if (!c.grid.floors_hold) fail("valuation floor: v_p(A) < mu_p(lambda_v)");
    c.lower_bound_attested = c.grid.floors_hold && (c.grid.min().infinite || Valuation::of(rhs) <= c.grid.min());
    if (!c.lower_bound_attested) fail("lower bound: grid minimum below rhs");
    c.stabilized = c.grid.min_half() == c.grid.min();
    if (!c.stabilized) fail("stabilization: minimum changed between B and 2B");
    if (c.grid.min() != Valuation::of(rhs)) fail("grid minimum differs from rhs");
    Valuation best = Valuation::inf();
    try {
        c.global_witness = construct_witness(ctx, WitnessTarget::global);
        best = min_val(best, c.global_witness->achieved);
    } catch (const std::exception& e) {
        fail(std::string("global witness: ") + e.what());
    }
    for (const auto& e : c.rhs.ledger) {
        try {
            Witness w = construct_witness(ctx, WitnessTarget::place, e.ell);
            best = min_val(best, w.achieved);
            c.place_witnesses.push_back(w);
        } catch (const std::exception& ex) {
            fail(std::string("place witness at ") + std::to_string(e.ell) + ": " + ex.what());
        }
    }
    for (const auto& e : c.rhs.ledger) {
        auto lw = local_floor_witness(ctx, e.ell);
        if (lw) c.local_witnesses.push_back(*lw);
        else fail("local floor witness at " + std::to_string(e.ell) + ": none found");
    }
    if (best != Valuation::of(rhs)) fail("no witness attains rhs");
    return c;
}

}  // namespace muderiv
