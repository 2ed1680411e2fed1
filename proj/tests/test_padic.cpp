#include "doctest.h"

#include "muderiv/padic.hpp"

#include <random>

using namespace muderiv;

namespace {

// log(x) for x = 1 mod p by the plain rational series, summed far past the target precision
mpq_class series_log(long p, const mpq_class& x, long terms) {
    mpq_class z = x - 1, zk = z, s = 0;
    for (long k = 1; k <= terms; ++k) {
        mpq_class t = zk / k;
        s += (k % 2 == 1) ? t : mpq_class(-t);
        zk *= z;
    }
    (void)p;
    return s;
}

PadicNum oracle_log(long p, const mpq_class& unit, long prec) {
    // log(u) = log(u^(p-1)) / (p-1)
    mpq_class v = 1;
    for (long i = 0; i < p - 1; ++i) v *= unit;
    mpq_class s = series_log(p, v, 4 * prec) / (p - 1);
    return PadicNum::from_rational(p, s, prec + 10);
}

}  // namespace

TEST_CASE("valuation basics") {
    CHECK(val_p(PadicNum::from_integer(5, 5)) == 1);
    CHECK(val_p(PadicNum::from_integer(5, 1)) == 0);
    CHECK(val_p(PadicNum::from_integer(3, 9 * 7)) == 2);
    CHECK(PadicNum(7, 40).is_exact_zero());
    CHECK(val_p(PadicNum(7, 40)) == kValInf);
    CHECK(val_p(PadicNum::from_rational(5, mpq_class(3, 25))) == -2);
}

TEST_CASE("leading digit nonzero and round trip") {
    PadicNum x = PadicNum::from_rational(7, mpq_class(2, 3), 20);
    CHECK(x.digits().front() != 0);
    PadicNum one = x * PadicNum::from_integer(7, 3, 20) / PadicNum::from_integer(7, 2, 20);
    CHECK(one.congruent(PadicNum::from_integer(7, 1, 20)));
    CHECK((x - x).is_zero());
}

TEST_CASE("precision never increases") {
    PadicNum a = PadicNum::from_integer(3, 17, 10);
    PadicNum b = PadicNum::from_integer(3, 5, 25);
    CHECK((a + b).abs_prec() <= std::min(a.abs_prec(), b.abs_prec()));
    CHECK((a * b).prec() <= std::min(a.prec(), b.prec()));
    PadicNum c = PadicNum::from_integer(3, 1, 10) + PadicNum::from_integer(3, 8, 10);  // 9: cancels two digits
    CHECK(c.val() == 2);
    CHECK(c.prec() == 8);
}

TEST_CASE("iwasawa log normalisation") {
    CHECK(iwasawa_log(PadicNum::from_integer(5, 5)).is_zero());
    CHECK(iwasawa_log(PadicNum::from_integer(5, 1)).is_zero());
    CHECK(iwasawa_log(teichmuller(7, 3)).is_zero());
    CHECK_THROWS(iwasawa_log(PadicNum(5, 40)));
}

TEST_CASE("log(1+5) against the rational series") {
    PadicNum l = iwasawa_log(PadicNum::from_integer(5, 6, 40));
    CHECK(l.val() == 1);
    PadicNum ref = PadicNum::from_rational(5, series_log(5, 6, 120), 40);
    CHECK(l.congruent(ref));
    CHECK(l.abs_prec() >= 30);
}

TEST_CASE("log of non-principal units against the series oracle") {
    for (long p : {3L, 5L, 7L, 11L}) {
        for (long a : {2L, 10L, 13L}) {
            if (a % p == 0) continue;
            PadicNum l = iwasawa_log_rational(p, a, 30);
            CHECK(l.congruent(oracle_log(p, a, 30)));
        }
    }
    // log_p(p * u) = log_p(u)
    CHECK(iwasawa_log_rational(5, 10, 30).congruent(iwasawa_log_rational(5, 2, 30)));
}

TEST_CASE("log multiplicativity on random principal units") {
    std::mt19937_64 rng(12345);
    const long M = 30;
    for (long p : {3L, 5L, 7L}) {
        std::uniform_int_distribution<long> dist(0, 1000000);
        for (int i = 0; i < 1000; ++i) {
            mpz_class x = 1 + p * mpz_class(dist(rng)), y = 1 + p * mpz_class(dist(rng));
            PadicNum X = PadicNum::from_integer(p, x, M), Y = PadicNum::from_integer(p, y, M);
            PadicNum lhs = iwasawa_log(X * Y), rhs = iwasawa_log(X) + iwasawa_log(Y);
            PadicNum d = lhs - rhs;
            CHECK((d.is_exact_zero() || d.val() >= M - 2 || d.is_zero()));
        }
    }
}

TEST_CASE("valuation additivity on random pairs") {
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<long> dist(1, 10000000);
    for (long p : {3L, 5L, 11L}) {
        for (int i = 0; i < 500; ++i) {
            mpq_class a(dist(rng), dist(rng)), b(dist(rng), dist(rng));
            a.canonicalize();
            b.canonicalize();
            PadicNum A = PadicNum::from_rational(p, a), B = PadicNum::from_rational(p, b);
            CHECK(val_p(A * B) == val_p(A) + val_p(B));
            CHECK(val_p(A) == vp_rational(a, p));
        }
    }
}

TEST_CASE("teichmuller lifts") {
    for (long p : {3L, 5L, 7L, 13L}) {
        for (long a = 1; a < p; ++a) {
            PadicNum w = teichmuller(p, a, 30);
            CHECK(w.pow(p - 1).congruent(PadicNum::from_integer(p, 1, 30)));
            CHECK(mpz_class(w.to_integer() % p) == a);
        }
    }
}

TEST_CASE("derivative of (1+p)^k is log_p(1+p)") {
    for (long p : {3L, 5L, 7L}) {
        auto f = [p](const mpz_class& k) { return PadicNum::from_integer(p, 1 + p, 60).pow(k); };
        DerivativeResult r = padic_derivative(f, p, 60, 5);
        CHECK(r.converged);
        CHECK(r.quotients.size() == 5);
        PadicNum l = iwasawa_log(PadicNum::from_integer(p, 1 + p, 60));
        PadicNum d = r.value - l;
        CHECK((d.is_zero() || d.val() >= 5));
        CHECK(val_p(r.value) == 1);
    }
}

TEST_CASE("derivative of a constant vanishes") {
    auto f = [](const mpz_class&) { return PadicNum::from_integer(5, 42); };
    DerivativeResult r = padic_derivative(f, 5);
    CHECK(r.converged);
    CHECK(r.value.is_zero());
}

TEST_CASE("derivative of <|w|>^{ck} is c log_p |w|") {
    // c = 2; compared at n = 3, 4, 5
    for (long p : {3L, 5L}) {
        for (long ell : {2L, 7L}) {
            mpq_class w(1, ell);
            PadicNum a = principal_unit_rational(p, w, 60);
            auto f = [a](const mpz_class& k) { return a.pow(2 * k); };
            DerivativeResult r = padic_derivative(f, p, 60, 5);
            PadicNum ref = PadicNum::from_integer(p, -2, 60) * oracle_log(p, ell, 50);
            for (long n = 3; n <= 5; ++n) {
                PadicNum d = r.quotients[n - 1] - ref;
                CHECK((d.is_zero() || d.val() >= n));
            }
        }
    }
}

TEST_CASE("raw powers of a non-principal unit do not converge") {
    auto f = [](const mpz_class& k) { return PadicNum::from_rational(5, mpq_class(1, 2), 60).pow(k); };
    CHECK_FALSE(padic_derivative(f, 5, 60, 5).converged);
    PadicNum u = principal_unit_rational(5, 2, 40);
    CHECK((u - PadicNum::from_integer(5, 1, 40)).val() >= 1);
    CHECK(iwasawa_log(u).congruent(iwasawa_log_rational(5, 2, 40)));
}

TEST_CASE("Leibniz rule for closed forms") {
    const long p = 5;
    auto f = [](const mpz_class& k) { return PadicNum::from_integer(p, 6, 60).pow(k); };
    PadicNum b = principal_unit_rational(p, mpq_class(1, 9), 60);
    auto g = [b](const mpz_class& k) { return b.pow(k); };
    auto fg = [&](const mpz_class& k) { return f(k) * g(k); };
    PadicNum lhs = padic_derivative(fg, p, 60, 5).value;
    PadicNum rhs = g(0) * padic_derivative(f, p, 60, 5).value + f(0) * padic_derivative(g, p, 60, 5).value;
    PadicNum d = lhs - rhs;
    CHECK((d.is_zero() || d.val() >= 5));
}

TEST_CASE("non-convergent sequences are reported") {
    // f(p^n) jumps by a unit at every step
    auto f2 = [](const mpz_class& k) {
        if (k == 0) return PadicNum::from_integer(3, 0);
        long n = 0;
        mpz_class m = k;
        while (m % 3 == 0) {
            m /= 3;
            ++n;
        }
        return PadicNum::from_integer(3, n % 2 == 0 ? 1 : 2);
    };
    DerivativeResult r = padic_derivative(f2, 3, 40, 5);
    CHECK_FALSE(r.converged);
    CHECK(!r.message.empty());
}
