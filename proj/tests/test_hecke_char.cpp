#include "doctest.h"

#include "muderiv/hecke_char.hpp"

#include <set>

using namespace muderiv;

namespace {

// sign making lambda((alpha)) = +-alpha^k well defined: alpha must be a square mod sqrt(-q)
int canonical_sign_oracle(const QuadField& K, const Elt& a) {
    long q = -K.disc();
    long r = mod_l(static_cast<long>((a.x + a.y * ((q + 1) / 2)) % q), q);
    std::set<long> squares;
    for (long t = 1; t < q; ++t) squares.insert(t * t % q);
    return squares.count(r) ? 1 : -1;
}

std::vector<Elt> sample_elements(const GlobalHeckeChar& lam, int count) {
    std::vector<Elt> out;
    for (long y = -6; y <= 6 && static_cast<int>(out.size()) < count; ++y)
        for (long x = -9; x <= 9 && static_cast<int>(out.size()) < count; ++x) {
            Elt a{x, y};
            if (x == 0 && y == 0) continue;
            if (lam.coprime_to_conductor(a)) out.push_back(a);
        }
    return out;
}

Cyclo norm_power(const QuadField& K, const Elt& a, long e, long N) {
    mpq_class n(mpz_class(std::to_string(K.norm(a))));
    mpq_class f = 1;
    for (long i = 0; i < e; ++i) f *= n;
    return Cyclo::rational(N, f);
}

}  // namespace

TEST_CASE("canonical characters: values are +-alpha^k with the square-class sign") {
    for (long d : {7L, 11L, 19L}) {
        QuadField K(d);
        for (int k : {1, 3}) {
            GlobalHeckeChar lam = build_selfdual_char(K, k, {{d, 1}});
            long N = lam.cyclo_level();
            for (const Elt& a : sample_elements(lam, 20)) {
                Cyclo expect = K.embed(a, N).pow(k) * mpq_class(canonical_sign_oracle(K, a));
                CHECK(lam.value(a) == expect);
                // well defined on ideals
                CHECK(lam.value(K.neg(a)) == lam.value(a));
                // self-duality on principal ideals: lambda(a) lambda(abar) = N(a)^k
                CHECK(lam.value(a) * lam.value(K.conj(a)) == norm_power(K, a, k, N));
            }
        }
    }
}

TEST_CASE("no unramified self-dual character of odd weight") {
    QuadField K(7);
    CHECK_THROWS_AS(build_selfdual_char(K, 1, {}), CharacterError);
    CHECK_THROWS_AS(build_selfdual_char(K, 1, {{1, 1}}), CharacterError);
    CHECK_THROWS_AS(build_selfdual_char(K, 2, {{7, 1}}), CharacterError);
    CHECK_THROWS_AS(build_selfdual_char(K, 1, {{7, 2}}), CharacterError);
    CHECK_THROWS_AS(build_selfdual_char(K, 1, {{7, 1}, {3, 1}}, "split:3:1"), CharacterError);  // 3 is inert
    CHECK_THROWS_AS(parse_twist_label("canonical+bogus:3"), CharacterError);
}

TEST_CASE("twist labels round trip") {
    auto t = parse_twist_label("canonical+split:5:2+inert:3:1");
    REQUIRE(t.size() == 2);
    CHECK(t[0].type == TwistType::split);
    CHECK(t[0].ell == 5);
    CHECK(t[0].j == 2);
    CHECK(t[1].type == TwistType::inert);
    CHECK(twist_label(t) == "canonical+split:5:2+inert:3:1");
    CHECK(parse_twist_label("canonical").empty());
}

TEST_CASE("lambda * lambda^c = N^k on 1000 ideals, twisted characters included") {
    struct Case {
        long d;
        int k;
        std::vector<std::pair<long, int>> cond;
        std::string label;
    };
    std::vector<Case> cases = {
        {11, 1, {{11, 1}}, ""},
        {11, 1, {{11, 1}, {3, 1}}, "split:3:1"},
        {11, 1, {{11, 1}, {5, 1}}, "split:5:1"},
        {7, 1, {{7, 1}, {3, 1}}, "inert:3:1"},
        {19, 3, {{19, 1}, {5, 1}, {3, 1}}, "split:5:1+inert:3:2"},
    };
    for (const auto& c : cases) {
        QuadField K(c.d);
        GlobalHeckeChar lam = build_selfdual_char(K, c.k, c.cond, c.label);
        GlobalHeckeChar lc = lam.conjugate();
        long N = lam.cyclo_level();
        int checked = 0;
        for (const auto& I : ideals_up_to_norm(K, 3000)) {
            if (checked >= 1000) break;
            Elt g = K.ideal_generator(I);
            if (!lam.coprime_to_conductor(g)) continue;
            ++checked;
            CHECK(lam.ideal_value(I) * lc.ideal_value(I) == norm_power(K, g, c.k, N));
        }
        CHECK(checked == 1000);
    }
}

TEST_CASE("conductor decomposition") {
    QuadField K(19);
    GlobalHeckeChar lam = build_selfdual_char(K, 1, {{19, 1}, {5, 1}, {3, 1}}, "split:5:1+inert:3:1");
    for (const auto& c : lam.conductor_plus()) CHECK(classify_prime(K, c.place.ell).kind == SplitKind::split);
    for (const auto& c : lam.conductor_minus()) CHECK(classify_prime(K, c.place.ell).kind != SplitKind::split);
    CHECK(lam.conductor_plus().size() == 2);
    CHECK(lam.split_F().size() == 1);
    CHECK(lam.split_Fc().size() == 1);
    CHECK(lam.conductor_norm() == 19 * 25 * 9);
}

TEST_CASE("local components at unramified places") {
    QuadField K(11);
    GlobalHeckeChar lam = build_selfdual_char(K, 3, {{11, 1}});
    // 2 and 7 are inert in Q(sqrt(-11))
    for (long ell : {2L, 7L, 13L}) {
        Place v = place_of(K, ell);
        REQUIRE(v.kind == SplitKind::inert);
        LocalChar lc = local_component(lam, v);
        mpq_class w(1, ell * ell * ell);
        CHECK(*lc.uniformizer_value == ExactValue(-w));
        CHECK(lc.cond_exp == 0);
        LocalChar st = local_component(lambda_star(lam), v);
        CHECK(*st.uniformizer_value == ExactValue(-1));
        LocalChar tw = local_component(twist_by_norm(lam, 1), v);
        CHECK(*tw.uniformizer_value == ExactValue(-w / (ell * ell)));
        REQUIRE(tw.unit_table.size() == lc.unit_table.size());
        for (size_t i = 0; i < lc.unit_table.size(); ++i) CHECK(tw.unit_table[i].value == lc.unit_table[i].value);
        CHECK(local_component(twist_by_norm(lam, 0), v).uniformizer_value == lc.uniformizer_value);
    }
    // split place 3: the two primes together give |w|^k tau(ell)
    ExactValue f = f_uniformizer_value(lam, 3);
    CHECK(f == ExactValue(mpq_class(1, 27)));
    CHECK_FALSE(local_component(lam, place_of(K, 3, 0)).uniformizer_value.has_value());
}

TEST_CASE("ramified component has conductor exponent one") {
    QuadField K(7);
    GlobalHeckeChar lam = build_selfdual_char(K, 1, {{7, 1}});
    LocalChar lc = local_component(lam, place_of(K, 7));
    CHECK(lc.cond_exp == 1);
    CHECK(lc.unit_table.size() == 6);
    int nontrivial = 0;
    for (const auto& u : lc.unit_table) {
        nontrivial += !u.value.is_one();
        long r = u.residue.x;
        CHECK((u.value.is_one() ? 1 : -1) == legendre(r, 7));
    }
    CHECK(nontrivial == 3);
    LocalChar f = restrict_to_F(lc);
    CHECK(f.f_level);
    CHECK(f.cond_exp == 1);
    // tau(q) = 1 since q = N(sqrt(-q)); lambda*_q(q) = 1
    CHECK(*local_component(lambda_star(lam), place_of(K, 7)).uniformizer_value == ExactValue::one());
}

TEST_CASE("inert twist component") {
    QuadField K(7);
    GlobalHeckeChar lam = build_selfdual_char(K, 1, {{7, 1}, {3, 1}}, "inert:3:1");
    LocalChar lc = local_component(lam, place_of(K, 3));
    CHECK(lc.cond_exp == 1);
    CHECK(lc.unit_table.size() == 8);
    // trivial on F_3^x
    for (const auto& u : restrict_to_F(lc).unit_table) CHECK(u.value.is_one());
    CHECK(restrict_to_F(lc).cond_exp == 0);
}

TEST_CASE("self-duality: restriction of lambda* to F_v^x is tau") {
    std::vector<std::tuple<long, int, std::vector<std::pair<long, int>>, std::string>> cases = {
        {7, 1, {{7, 1}}, ""},
        {11, 3, {{11, 1}}, ""},
        {11, 1, {{11, 1}, {3, 1}}, "split:3:1"},
        {19, 1, {{19, 1}, {5, 1}, {3, 1}}, "split:5:1+inert:3:1"},
        {43, 5, {{43, 1}}, ""},
    };
    for (const auto& [d, k, cond, label] : cases) {
        QuadField K(d);
        GlobalHeckeChar lam = build_selfdual_char(K, k, cond, label);
        for (long ell = 2; ell < 60; ++ell) {
            if (!is_prime(ell)) continue;
            CHECK(restriction_is_tau(lam, place_of(K, ell)));
            CHECK(restriction_is_tau(twist_by_norm(lam, 2), place_of(K, ell)));
        }
    }
}

TEST_CASE("local-global compatibility") {
    QuadField K(19);
    GlobalHeckeChar lam = build_selfdual_char(K, 1, {{19, 1}, {5, 1}, {3, 1}}, "split:5:1+inert:3:1");
    std::map<Place, LocalChar> comps;
    for (const auto& c : lam.conductor()) comps[c.place] = local_component(lam, c.place);
    auto lookup = [&](const LocalChar& lc, const Elt& a) {
        long ell = lc.place.ell;
        PrimeSplit ps = classify_prime(K, ell);
        for (const auto& u : lc.unit_table) {
            bool same;
            if (lc.place.kind == SplitKind::inert) {
                same = mod_l(static_cast<long>(a.x % ell), ell) == u.residue.x &&
                       mod_l(static_cast<long>(a.y % ell), ell) == u.residue.y;
            } else {
                const PrimeIdeal& pr = ps.primes_above[lc.place.which];
                same = K.residue(a, pr) == K.residue(u.residue, pr);
            }
            if (same) return u.value;
        }
        FAIL("residue not in table");
        return RootOfUnity();
    };
    // principal ideals: the finite-order part is the product of conductor components
    int n = 0;
    for (const Elt& a : sample_elements(lam, 50)) {
        RootOfUnity prod;
        for (const auto& [pl, lc] : comps) prod = prod * lookup(lc, a);
        CHECK(prod == lam.epsilon(a));
        CHECK(lam.value(a) == Cyclo::root(lam.cyclo_level(), prod) * K.embed(a, lam.cyclo_level()));
        ++n;
    }
    CHECK(n == 50);
    // rational ideals: lambda((m)) is the inverse product of F-uniformizer values
    for (long m = 1; m <= 120; ++m) {
        Elt a{m, 0};
        if (!lam.coprime_to_conductor(a)) continue;
        ExactValue prod = ExactValue::one();
        long r = m;
        for (long ell = 2; ell <= r; ++ell) {
            while (r % ell == 0) {
                prod = prod * f_uniformizer_value(lam, ell);
                r /= ell;
            }
        }
        Complex g = lam.value_complex(a);
        CHECK(static_cast<double>(abs(g * prod.to_complex() - Complex(1))) < 1e-25);
    }
}

TEST_CASE("star and conjugate forms") {
    QuadField K(11);
    GlobalHeckeChar lam = build_selfdual_char(K, 1, {{11, 1}, {3, 1}}, "split:3:1");
    GlobalHeckeChar st = lambda_star(lam);
    CHECK_THROWS(st.value(Elt{2, 1}));
    for (const Elt& a : sample_elements(lam, 20)) {
        CHECK(static_cast<double>(abs(abs(st.value_complex(a)) - Real(1))) < 1e-28);
        CHECK(static_cast<double>(abs(lam.conjugate().value_complex(a) - lam.value_complex(K.conj(a)))) < 1e-25);
    }
    CHECK(lam.conjugate().conjugate().label() == lam.label());
    CHECK(lam.label() == "canonical+split:3:1");
}
