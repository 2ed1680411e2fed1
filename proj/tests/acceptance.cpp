// acceptance harness: one PASS/FAIL line per criterion, exit 1 if any fails
#include "muderiv/certificate.hpp"
#include "muderiv/cm_forms.hpp"
#include "muderiv/fourier_mu.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

using namespace muderiv;

namespace {

constexpr long kBound = 500;           // grid numerators for criteria 1-3, 5
constexpr double kMaxSeconds = 300;    // per triple
constexpr long kDerivN[] = {3, 4, 5};  // step p^n, agreement to n - 2
constexpr long kAltMax = 10000;
constexpr long kProbeBound = 2000;
constexpr double kProbeTol = 1e-6;
constexpr long kQexpBound = 2000;

struct Triple {
    long d;
    long p;
    const char* label;
};

const Triple kTriples[] = {{11, 3, "canonical"}, {11, 5, "canonical"}, {19, 5, "canonical"},
                           {19, 7, "canonical"}, {11, 3, "canonical+split:5:2"}};

GlobalHeckeChar mk(const Triple& t) { return GlobalHeckeChar(QuadField(t.d), 1, parse_twist_label(t.label)); }

std::string name(const Triple& t) {
    std::ostringstream os;
    os << "(d=" << t.d << ",p=" << t.p << "," << t.label << ")";
    return os.str();
}

struct Report {
    int failed = 0;
    void line(int no, bool ok, const std::string& what, const std::string& detail) {
        std::cout << "criterion " << no << ": " << (ok ? "PASS" : "FAIL") << " - " << what << " [" << detail << "]"
                  << std::endl;
        if (!ok) ++failed;
    }
};

std::vector<mpq_class> grid(long q, long bound) {
    std::vector<mpq_class> r;
    for (long n = 1; n <= bound; ++n) {
        r.push_back(mpq_class(n));
        if (n % q) r.push_back(mpq_class(n, q));
    }
    return r;
}

bool in_grid(const mpq_class& b, long q, long bound) {
    return (b.get_den() == 1 || b.get_den() == q) && b.get_num() <= bound;
}

// criterion 5: the two-term cancellation at q happens exactly when s_q tau_q(beta) = -1
bool eps_normalization(const AssemblyContext& ctx, long& pairs) {
    const QuadField& K = ctx.lam.field();
    int s = ctx.roots.sign_at(ctx.q);
    for (const auto& b : grid(ctx.q, kBound)) {
        ++pairs;
        bool vanished = whittaker_A_ramified(K, b, ctx.eps).vanished();
        if (vanished != (s * tau_local(K, ctx.q, b) == -1)) return false;
    }
    return true;
}

// criterion 2, second half: vanishing place and the exact sign identity on every support point
bool sign_identity(const AssemblyContext& ctx, long& checked) {
    const QuadField& K = ctx.lam.field();
    for (const auto& b : grid(ctx.q, kBound)) {
        long u = d0_class(b, ctx.p);
        if (u == 0) continue;
        CoefficientAssembly a = assemble_coefficient(ctx, AssemblyMode::value, b, u);
        if (!a.in_support) continue;
        VanishingWitness w = vanishing_witness(ctx, b);
        if (w.kind == SplitKind::split) return false;
        RootOfUnity W_v = RootOfUnity::one(), xi = RootOfUnity::one();
        for (const auto& v : ctx.roots.places)
            if (v.ell == w.ell) W_v = v.tate_W, xi = v.xi_value;
        RootOfUnity lhs = tau_local(K, w.ell, b) == 1 ? W_v : W_v * RootOfUnity::minus_one();
        if (lhs != xi * RootOfUnity::minus_one()) return false;
        ++checked;
    }
    return true;
}

}  // namespace

int main() {
    Report rep;
    std::cout << "tolerances: grid B=" << kBound << " exact; derivative agreement v_p >= n-2 for n=3,4,5; "
              << "alternating sums n<=" << kAltMax << "; probe B=" << kProbeBound << " residual<" << kProbeTol
              << "; q-expansion n<=" << kQexpBound << "; runtime<" << kMaxSeconds << "s per triple" << std::endl;

    // criterion 5 runs first; a failure blocks 1-3
    bool eps_ok = true;
    {
        long pairs = 0;
        std::string bad;
        for (const auto& t : kTriples) {
            AssemblyContext ctx(mk(t), t.p);
            if (!eps_normalization(ctx, pairs)) eps_ok = false, bad += name(t);
        }
        rep.line(5, eps_ok, "epsilon normalization: Case I cancellation exact on all ramified grid pairs",
                 std::to_string(pairs) + " pairs" + (bad.empty() ? "" : ", failing " + bad));
    }

    std::vector<MuCertificate> certs;
    std::vector<double> secs;
    if (eps_ok) {
        for (const auto& t : kTriples) {
            auto t0 = std::chrono::steady_clock::now();
            certs.push_back(verify_theorem_a(mk(t), t.p, kBound));
            secs.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        }
    }

    // 1
    if (!eps_ok) {
        rep.line(1, false, "grid minimum equals the mu formula", "blocked by criterion 5");
    } else {
        bool ok = true;
        std::ostringstream det;
        for (size_t i = 0; i < certs.size(); ++i) {
            const auto& c = certs[i];
            const auto& t = kTriples[i];
            bool eq = c.grid.min_half() == Valuation::of(c.rhs.rhs) && c.equal();
            bool wit = c.global_witness && in_grid(c.global_witness->beta, t.d, kBound) &&
                       c.global_witness->achieved == Valuation::of(c.rhs.mu_prime);
            for (const auto& w : c.place_witnesses) wit = wit && in_grid(w.beta, t.d, kBound);
            bool fast = secs[i] < kMaxSeconds;
            ok = ok && eq && wit && fast && c.roots.W == -1;
            det << name(t) << " min=" << c.grid.min_half().str() << " rhs=" << c.rhs.rhs.get_str()
                << " witness=" << (c.global_witness ? c.global_witness->beta.get_str() : "none") << " "
                << std::fixed << std::setprecision(2) << secs[i] << "s; ";
            for (const auto& f : c.failures) det << "failure: " << f << "; ";
        }
        rep.line(1, ok, "grid minimum equals the mu formula at B=500, witness inside the grid", det.str());
    }

    // 2
    if (!eps_ok) {
        rep.line(2, false, "vanishing", "blocked by criterion 5");
    } else {
        bool ok = true;
        long checked = 0;
        for (size_t i = 0; i < certs.size(); ++i) {
            AssemblyContext ctx(mk(kTriples[i]), kTriples[i].p);
            ok = ok && certs[i].grid.all_totals_vanish && sign_identity(ctx, checked);
        }
        rep.line(2, ok, "every grid coefficient vanishes; vanishing place satisfies W_v tau(beta) = -lambda*_v(xi)",
                 std::to_string(checked) + " support points");
    }

    // 3
    if (!eps_ok) {
        rep.line(3, false, "lower bound", "blocked by criterion 5");
    } else {
        bool ok = true;
        long pts = 0;
        for (const auto& c : certs) {
            ok = ok && c.lower_bound_attested && c.grid.floors_hold && c.grid.single_vanishing;
            ok = ok && (c.grid.min().infinite || Valuation::of(c.rhs.rhs) <= c.grid.min());
            pts += c.grid.in_support;
        }
        rep.line(3, ok, "normalized valuation >= rhs and v_p(A) >= mu_p(lambda_v) on every grid point",
                 std::to_string(pts) + " support points (B doubled for stabilization)");
    }

    // 4
    {
        std::mt19937 rng(20261019);
        QuadField K(19);
        PinnedEpsilon pe = pin_epsilon(K, root_number_data(GlobalHeckeChar(K, 1, {})).sign_at(19));
        int tested = 0, bad = 0;
        while (tested < 100) {
            long p = std::vector<long>{3, 5, 7}[rng() % 3];
            LocalFactor f;
            int which = rng() % 3;
            if (which == 0) {
                long ell = std::vector<long>{2, 11, 13, 17}[rng() % 4];
                f = whittaker_a(ell, SplitKind::inert, rng() % 9, rng() % 2 ? 1 : -1);
            } else if (which == 1) {
                long ell = std::vector<long>{2, 13, 29}[rng() % 3];
                f = whittaker_A_inert(ell, mpq_class(1 + static_cast<long>(rng() % 300)), rng() % 2 ? 1 : -1);
            } else {
                long b = 1 + rng() % 500;
                if (b % 19 == 0) continue;
                f = whittaker_A_ramified(K, mpq_class(b, rng() % 2 ? 19 : 1), pe);
            }
            ++tested;
            auto lim = padic_derivative([&](const mpz_class& s) { return f.rational_part_at(p, s, 30); }, p, 30, 5);
            PadicNum closed = PadicNum::from_rational(p, f.rational_derivative(), 30) *
                              iwasawa_log_rational(p, mpq_class(1, f.ell), 30);
            for (long n : kDerivN) {
                PadicNum diff = lim.quotients.at(n - 1) - closed;
                if (!diff.is_zero() && diff.val() < n - 2) ++bad;
            }
        }
        rep.line(4, bad == 0, "closed-form derivatives agree with the limit quotient",
                 std::to_string(tested) + " inputs, " + std::to_string(bad) + " disagreements");
    }

    // 6
    {
        bool ok = true;
        std::ostringstream det;
        for (const auto& t : kTriples) {
            AssemblyContext ctx(mk(t), t.p);
            for (const auto& c : ctx.lam.conductor_minus()) {
                auto w = local_floor_witness(ctx, c.place.ell);
                bool hit = w && w->achieved == w->mu;
                ok = ok && hit;
                det << name(t) << " v=" << c.place.ell << " eta=" << (w ? w->eta.get_str() : "none")
                    << " mu=" << (w ? w->mu.str() : "?") << "; ";
            }
        }
        rep.line(6, ok, "local eta with v_p(A) = mu_p(lambda_v) at every v | c-", det.str());
    }

    // 7
    {
        bool ok = true;
        mpz_class s = 0;
        for (long n = 0; n <= kAltMax; ++n) {
            s += (n % 2 ? -1 : 1) * n;
            mpz_class want = n % 2 == 0 ? mpz_class(n / 2) : mpz_class(-(n + 1) / 2);
            if (s != want) ok = false;
        }
        for (long n = 0; n <= 400; ++n) {
            LocalFactor a = whittaker_a(7, SplitKind::inert, n, -1);
            if (a.vanished() != (n % 2 == 1)) ok = false;
            mpz_class alt = n % 2 == 0 ? mpz_class(n / 2) : mpz_class(-(n + 1) / 2);
            if (a.rational_derivative() != 2 * mpq_class(alt)) ok = false;
        }
        rep.line(7, ok, "alternating sums and odd-length vanishing of whittaker_a",
                 "sums n<=" + std::to_string(kAltMax) + ", factors n<=400");
    }

    // 8, 9
    {
        bool ok8 = true, ok9 = true;
        std::ostringstream d8, d9;
        std::vector<std::string> seen;
        for (const auto& t : kTriples) {
            std::string key = std::to_string(t.d) + t.label;
            if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
            seen.push_back(key);
            GlobalHeckeChar lam = mk(t);
            QExpansion f = q_expansion(lam, std::max(kProbeBound, kQexpBound));
            ProbeResult pr = functional_equation_probe(f, 1.1, kProbeTol);
            int W = global_root_number(lam);
            ok8 = ok8 && pr.conclusive && pr.residual < kProbeTol && pr.sign == W;
            d8 << t.d << ":" << t.label << " W=" << W << " probe=" << pr.sign << " residual=" << std::scientific
               << std::setprecision(1) << pr.residual << "; ";

            const QuadField& K = lam.field();
            long bad = 0;
            for (long m = 2; m <= kQexpBound; ++m)
                for (long n = m + 1; m * n <= kQexpBound; ++n)
                    if (gcd_l(m, n) == 1 && !(f.coeff(m * n) == f.coeff(m) * f.coeff(n))) ++bad;
            for (long ell = 2; ell <= kQexpBound; ++ell) {
                if (!is_prime(ell)) continue;
                if (classify_prime(K, ell).kind == SplitKind::inert && !f.coeff(ell).is_zero()) ++bad;
                double bound = 2 * std::pow(static_cast<double>(ell), lam.weight() / 2.0) * (1 + 1e-12);
                if (static_cast<double>(abs(f.approx[ell])) > bound) ++bad;
            }
            if (!f.coeff(1).is_rational() || f.coeff(1).rational_part() != 1) ++bad;
            ok9 = ok9 && bad == 0;
            d9 << t.d << ":" << t.label << " violations=" << bad << "; ";
        }
        rep.line(8, ok8, "exact root number equals the functional-equation probe sign", d8.str());
        rep.line(9, ok9, "q-expansion multiplicativity, inert vanishing, Hecke bound", d9.str());
    }

    // 10
    {
        bool ok = true;
        for (const auto& t : kTriples) {
            std::string a = dump_certificate(certificate_json(verify_theorem_a(mk(t), t.p, kBound, kDefaultPrecision, 1)));
            std::string b = dump_certificate(certificate_json(verify_theorem_a(mk(t), t.p, kBound, kDefaultPrecision, 0)));
            ok = ok && a == b;
            if (eps_ok) {
                size_t i = &t - kTriples;
                ok = ok && a == dump_certificate(certificate_json(certs[i]));
            }
        }
        rep.line(10, ok, "repeated runs give byte-identical certificates", "3 runs per triple, 1 thread vs pool");
    }

    std::cout << (rep.failed == 0 ? "ALL PASS" : std::to_string(rep.failed) + " FAILED") << std::endl;
    return rep.failed == 0 ? 0 : 1;
}
