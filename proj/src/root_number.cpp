#include "muderiv/root_number.hpp"

#include <stdexcept>

namespace muderiv {

RootOfUnity psi_local(long ell, const mpq_class& y) {
    mpz_class num = y.get_num(), den = y.get_den();
    long e = 0;
    mpz_class pe = 1;
    while (den % ell == 0) {
        den /= ell;
        pe *= ell;
        ++e;
    }
    if (e == 0) return RootOfUnity::one();
    // {y}_ell = num * den^{-1} mod ell^e, over ell^e
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pe.get_mpz_t());
    mpz_class r = (num * inv) % pe;
    if (r < 0) r += pe;
    return RootOfUnity(-r.get_si(), pe.get_si());
}

namespace {

RootOfUnity unit_product_except(const GlobalHeckeChar& lam, const Elt& a, long skip_ell, int skip_which) {
    RootOfUnity r;
    for (const auto& c : lam.conductor()) {
        if (c.place.ell == skip_ell && (skip_which < 0 || c.place.which == skip_which)) continue;
        r = r * lam.local_unit_value(c.place, a);
    }
    return r;
}

// unitary lambda at a uniformizer pi of w, from the product formula; `unit_at_infinity` is (sigma(pi)/|pi|)^k
RootOfUnity uniformizer_value(const GlobalHeckeChar& lam, const Elt& pi, long ell, int which,
                              const RootOfUnity& unit_at_infinity) {
    return (unit_at_infinity * unit_product_except(lam, pi, ell, which)).inverse();
}

Cyclo sqrt_q(long N, long q) {
    // sqrt(q) = -i * sqrt(-q)
    return Cyclo::root(N, RootOfUnity(3, 4)) * Cyclo::sqrt_minus_q(N, q);
}

bool in_conductor(const GlobalHeckeChar& lam, long ell) {
    for (const auto& c : lam.conductor())
        if (c.place.ell == ell) return true;
    return false;
}

int as_sign(const Cyclo& x, const std::string& what) {
    if (x == Cyclo::rational(x.N(), 1)) return 1;
    if (x == Cyclo::rational(x.N(), -1)) return -1;
    throw std::logic_error(what + " is not +-1: " + x.str());
}

}  // namespace

RootOfUnity lambda_star_xi(const GlobalHeckeChar& lam, long ell) {
    const QuadField& K = lam.field();
    Elt xi = K.xi();
    RootOfUnity ik(lam.weight(), 4);
    if (ell == 0) return ik;
    if (!in_conductor(lam, ell)) return RootOfUnity::one();
    if (ell == lam.q()) return uniformizer_value(lam, xi, ell, -1, ik);
    RootOfUnity r;
    for (const auto& c : lam.conductor())
        if (c.place.ell == ell) r = r * lam.local_unit_value(c.place, xi);
    return r;
}

Cyclo tate_local_constant(const GlobalHeckeChar& lam, long ell, long N) {
    const QuadField& K = lam.field();
    RootOfUnity ik(lam.weight(), 4);
    if (!in_conductor(lam, ell)) return Cyclo::rational(N, 1);
    if (N % (4 * ell) != 0 || N % lam.cyclo_level() != 0)
        throw std::invalid_argument("tate_local_constant: level too small");
    if (ell == lam.q()) {
        Elt pi = K.xi();
        RootOfUnity chi_pi = uniformizer_value(lam, pi, ell, -1, ik);
        Elt pi2 = K.mul(pi, pi);
        Place w{ell, SplitKind::ramified, 0};
        Cyclo S(N);
        for (long u = 1; u < ell; ++u) {
            // Tr(u / pi^2) with pi^2 = -q rational
            mpq_class tr(2 * u, static_cast<long>(pi2.x));
            S = S + Cyclo::root(N, lam.local_unit_value(w, Elt{u, 0}).inverse() * psi_local(ell, tr));
        }
        // pi^{-(a+d)} with a = d = 1
        return Cyclo::root(N, chi_pi.pow(2)) * S * sqrt_q(N, ell) * mpq_class(1, ell);
    }
    PrimeSplit ps = classify_prime(K, ell);
    if (ps.kind == SplitKind::inert) {
        Elt pi{ell, 0};
        RootOfUnity chi_pi = uniformizer_value(lam, pi, ell, -1, RootOfUnity::one());
        Place w{ell, SplitKind::inert, 0};
        Cyclo S(N);
        for (long b = 0; b < ell; ++b)
            for (long a = 0; a < ell; ++a) {
                if (a == 0 && b == 0) continue;
                Elt u{a, b};
                mpq_class tr(static_cast<long>(K.trace(u)), ell);
                S = S + Cyclo::root(N, lam.local_unit_value(w, u).inverse() * psi_local(ell, tr));
            }
        return Cyclo::root(N, chi_pi) * S * mpq_class(1, ell);
    }
    // split: both primes together; pi_bar = conj(pi) generates the second prime
    Elt pi = K.prime_generator(ps.primes_above[0]);
    Elt pib = K.conj(pi);
    if (K.residue(pi, ps.primes_above[0]) != 0) throw std::logic_error("tate_local_constant: bad generator");
    Cyclo W = Cyclo::rational(N, mpq_class(1, ell));
    for (int which = 0; which < 2; ++which) {
        const Elt& p_w = which == 0 ? pi : pib;
        const Elt& p_o = which == 0 ? pib : pi;
        const PrimeIdeal& pr = ps.primes_above[which];
        // (sigma(pi) sigma(pibar) / ell)^k = 1, so the archimedean units cancel in the product
        RootOfUnity chi_pi = unit_product_except(lam, p_w, ell, which).inverse();
        Place w{ell, SplitKind::split, which};
        Cyclo S(N);
        for (long r = 1; r < ell; ++r) {
            // u / pi = u * pibar / ell and iota_w(u * pibar) mod ell is the residue at w
            long res = K.residue(K.mul(Elt{r, 0}, p_o), pr);
            S = S + Cyclo::root(N, lam.local_unit_value(w, Elt{r, 0}).inverse() * psi_local(ell, mpq_class(res, ell)));
        }
        W = W * Cyclo::root(N, chi_pi) * S;
    }
    return W;
}

RootOfUnity local_root_number(const LocalChar& chi_star, const RootOfUnity& xi_value, long c_val) {
    if (chi_star.place.kind == SplitKind::split) return xi_value;
    long e = chi_star.cond_exp + c_val;
    return e % 2 == 0 ? xi_value : xi_value * RootOfUnity::minus_one();
}

RootOfUnity local_root_number_archimedean(const RootOfUnity& xi_value) { return xi_value; }

int RootNumberData::sign_at(long ell) const {
    for (const auto& p : places)
        if (p.ell == ell) return p.tate_sign;
    return 1;
}

bool RootNumberData::literal_agrees() const {
    for (const auto& p : places)
        if (p.tate_sign != p.literal_sign) return false;
    return W == W_literal;
}

RootNumberData root_number_data(const GlobalHeckeChar& lam) {
    GlobalHeckeChar ls = lam.star().with_norm_shift(0);
    RootNumberData out;
    long N = lcm_l(4, lam.cyclo_level());
    std::vector<long> ells;
    for (const auto& c : lam.conductor()) {
        N = lcm_l(N, c.place.ell);
        if (ells.empty() || ells.back() != c.place.ell) ells.push_back(c.place.ell);
    }
    PlaceRootData inf;
    inf.ell = 0;
    inf.kind = SplitKind::split;
    inf.xi_value = lambda_star_xi(lam, 0);
    inf.tate_W = RootOfUnity(lam.weight(), 4);
    inf.tate_sign = 1;
    inf.literal_W = local_root_number_archimedean(inf.xi_value);
    inf.literal_sign = 1;
    out.places.push_back(inf);
    Cyclo W = Cyclo::root(N, inf.tate_W);
    RootOfUnity W_lit = inf.literal_W;
    for (long ell : ells) {
        PlaceRootData pd;
        pd.ell = ell;
        pd.kind = classify_prime(lam.field(), ell).kind;
        pd.in_conductor = true;
        LocalChar lc = local_component(ls, place_of(lam.field(), ell, 0));
        pd.cond_exp = lc.cond_exp;
        pd.xi_value = lambda_star_xi(lam, ell);
        Cyclo Wv = tate_local_constant(lam, ell, N);
        Cyclo s = Wv * Cyclo::root(N, pd.xi_value.inverse());
        pd.tate_sign = as_sign(s, "local sign at " + std::to_string(ell));
        pd.tate_W = pd.tate_sign == 1 ? pd.xi_value : pd.xi_value * RootOfUnity::minus_one();
        pd.literal_W = local_root_number(lc, pd.xi_value, 0);
        pd.literal_sign = pd.literal_W == pd.xi_value ? 1 : -1;
        W = W * Wv;
        W_lit = W_lit * pd.literal_W;
        out.places.push_back(pd);
    }
    out.W = as_sign(W, "global root number");
    if (W_lit == RootOfUnity::one()) out.W_literal = 1;
    else if (W_lit == RootOfUnity::minus_one()) out.W_literal = -1;
    else throw std::logic_error("literal root number is not +-1");
    return out;
}

int global_root_number(const GlobalHeckeChar& lam) { return root_number_data(lam).W; }

}  // namespace muderiv
