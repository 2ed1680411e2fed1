#include "doctest.h"

#include "muderiv/quad_field.hpp"

#include <algorithm>
#include <map>
#include <numeric>

using namespace muderiv;

namespace {

// number of roots of X^2 - tX + n mod ell, counted with multiplicity by brute force
int root_count(long t, long n, long ell) {
    int c = 0;
    for (long r = 0; r < ell; ++r)
        if (mod_l(static_cast<long>((static_cast<long long>(r) * r - t * r + n) % ell), ell) == 0) ++c;
    return c;
}

// reduced forms by the textbook inequalities, independent of the library enumeration
int brute_class_number(long D) {
    int h = 0;
    for (long a = 1; a <= -D; ++a)
        for (long b = -a; b <= a; ++b)
            for (long c = a; c <= -D; ++c) {
                if (b * b - 4 * a * c != D) continue;
                if (std::abs(b) > a || a > c) continue;
                if ((std::abs(b) == a || a == c) && b < 0) continue;
                if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
                ++h;
            }
    return h;
}

}  // namespace

TEST_CASE("discriminants and xi") {
    QuadField K7(7), K1(1), K5(5);
    CHECK(K7.disc() == -7);
    CHECK(K1.disc() == -4);
    CHECK(K5.disc() == -20);
    for (long d : {1L, 2L, 7L, 11L, 19L, 43L}) {
        QuadField K(d);
        Elt xi = K.xi();
        Elt sq = K.mul(xi, xi);
        CHECK(sq.x == K.disc());
        CHECK(sq.y == 0);
        CHECK(static_cast<double>(K.to_complex(xi).imag()) > 0);
    }
    CHECK_THROWS(QuadField(12));
}

TEST_CASE("classify_prime examples") {
    QuadField K(7);
    CHECK(classify_prime(K, 2).kind == SplitKind::split);
    CHECK(classify_prime(K, 7).kind == SplitKind::ramified);
    CHECK(classify_prime(K, 5).kind == SplitKind::inert);
    CHECK(classify_prime(K, 7).primes_above.size() == 1);
}

TEST_CASE("classify_prime agrees with factoring the minimal polynomial for 100 primes") {
    for (long d : {7L, 11L, 19L, 5L}) {
        QuadField K(d);
        int seen = 0;
        for (long ell = 2; seen < 100; ++ell) {
            if (!is_prime(ell)) continue;
            ++seen;
            PrimeSplit ps = classify_prime(K, ell);
            int e = 0;
            for (const auto& pr : ps.primes_above) e += pr.residue_degree * pr.ramification;
            CHECK(e == 2);
            int rc = root_count(K.trace_omega(), K.norm_omega(), ell);
            SplitKind expect = rc == 0 ? SplitKind::inert : (rc == 1 ? SplitKind::ramified : SplitKind::split);
            CHECK(ps.kind == expect);
        }
    }
}

TEST_CASE("class numbers") {
    CHECK(class_number(QuadField(7)) == 1);
    CHECK(class_number(QuadField(1)) == 1);
    CHECK(class_number(QuadField(23)) == 3);
    auto f = reduced_forms(-23);
    CHECK(f == std::vector<std::array<long, 3>>{{1, 1, 6}, {2, -1, 3}, {2, 1, 3}});
    for (long d : {1L, 2L, 3L, 5L, 6L, 7L, 11L, 14L, 15L, 19L, 23L, 31L, 43L, 47L, 67L, 71L, 163L}) {
        QuadField K(d);
        CHECK(K.class_number() == brute_class_number(K.disc()));
    }
    CHECK_THROWS(reduced_forms(-2000000));
}

TEST_CASE("ideals up to norm: examples") {
    QuadField K(7);
    auto I2 = ideals_up_to_norm(K, 2);
    REQUIRE(I2.size() == 3);
    CHECK(I2[0].norm == 1);
    CHECK(I2[1].norm == 2);
    CHECK(I2[2].norm == 2);
    auto I1 = ideals_up_to_norm(K, 1);
    CHECK(I1.size() == 1);
    auto I5 = ideals_up_to_norm(K, 5);
    int n4 = 0, n5 = 0;
    for (const auto& I : I5) {
        n4 += I.norm == 4;
        n5 += I.norm == 5;
    }
    CHECK(n4 == 3);
    CHECK(n5 == 0);
}

TEST_CASE("ideal counts match the zeta convolution up to 500") {
    for (long d : {7L, 11L, 23L, 5L}) {
        QuadField K(d);
        std::map<long, long> count;
        for (const auto& I : ideals_up_to_norm(K, 500)) ++count[I.norm];
        for (long n = 1; n <= 500; ++n) CHECK(count[n] == ideal_count_oracle(K.disc(), n));
    }
}

TEST_CASE("ideal generators and classes") {
    QuadField K(11);
    for (const auto& I : ideals_up_to_norm(K, 200)) {
        Elt g = K.ideal_generator(I);
        CHECK(K.norm(g) == I.norm);
        CHECK(I.class_index == 0);
    }
    QuadField K23(23);
    int nonprincipal = 0;
    for (const auto& I : ideals_up_to_norm(K23, 30)) nonprincipal += I.class_index != 0;
    CHECK(nonprincipal > 0);
    // norm of a product of generators is multiplicative
    Elt a{3, 2}, b{-1, 5};
    CHECK(K.norm(K.mul(a, b)) == K.norm(a) * K.norm(b));
}

TEST_CASE("prime generators and valuations") {
    QuadField K(19);
    for (long ell : {5L, 7L, 11L, 17L, 19L, 2L, 3L}) {
        PrimeSplit ps = classify_prime(K, ell);
        for (const auto& pr : ps.primes_above) {
            Elt pi = K.prime_generator(pr);
            CHECK(K.norm(pi) == (pr.residue_degree == 2 ? ell * ell : ell));
            CHECK(K.valuation(pi, pr) == 1);
            CHECK(K.valuation(K.mul(pi, K.mul(pi, Elt{1, 1})), pr) == 2 + K.valuation(Elt{1, 1}, pr));
        }
    }
}

TEST_CASE("embedding into Q(zeta_N)") {
    QuadField K(11);
    Elt xi = K.xi();
    Cyclo e = K.embed(xi, 22);
    CHECK(e * e == Cyclo::rational(22, -11));
    Elt a{2, 3}, b{-5, 1};
    CHECK(K.embed(K.mul(a, b), 11) == K.embed(a, 11) * K.embed(b, 11));
    CHECK(static_cast<double>(abs(K.embed(a, 11).to_complex() - K.to_complex(a))) < 1e-28);
}

TEST_CASE("csv export") {
    std::string csv = ideals_csv(ideals_up_to_norm(QuadField(7), 2));
    CHECK(csv.rfind("norm,a,b,scale,class_index\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}
