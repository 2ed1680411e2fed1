#include "muderiv/cm_forms.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <iomanip>
#include <sstream>

namespace muderiv {

QExpansion q_expansion(const GlobalHeckeChar& lam, long B) {
    if (B < 1) throw std::invalid_argument("q_expansion: bound must be >= 1");
    const QuadField& K = lam.field();
    QExpansion f;
    f.bound = B;
    f.weight = lam.weight() + 1;
    f.level = std::abs(K.disc()) * lam.conductor_norm();
    f.label = lam.label();
    long N = lam.cyclo_level();
    f.a.assign(B + 1, Cyclo(N));
    for (const auto& I : ideals_up_to_norm(K, B)) {
        f.a[I.norm] = f.a[I.norm] + lam.ideal_value(I);
        N = lcm_l(N, f.a[I.norm].N());
    }
    for (auto& c : f.a) c = c.lift(N);
    f.approx.resize(B + 1);
    for (long n = 0; n <= B; ++n) f.approx[n] = f.a[n].is_zero() ? Complex(0) : f.a[n].to_complex();
    return f;
}

namespace {

Complex theta(const QExpansion& f, long B, const Real& y) {
    Real sN = boost::multiprecision::sqrt(Real(f.level));
    Real step = 2 * pi_real() * y / sN;
    Complex s(0);
    for (long n = 1; n <= B && n <= f.bound; ++n) {
        if (f.a[n].is_zero()) continue;
        s += f.approx[n] * Real(boost::multiprecision::exp(-step * n));
    }
    return s;
}

Complex theta_ratio(const QExpansion& f, long B, const Real& y) {
    Complex l = theta(f, B, 1 / y);
    Complex r = theta(f, B, y) * Real(boost::multiprecision::pow(y, f.weight));
    return l / r;
}

}  // namespace

ProbeResult functional_equation_probe(const QExpansion& f, double y, double tol) {
    if (f.bound < 200) throw std::invalid_argument("functional_equation_probe: bound must be >= 200");
    ProbeResult res;
    res.bound = f.bound;
    res.y = Real(y);
    res.ratio = theta_ratio(f, f.bound, res.y);
    Complex half = theta_ratio(f, f.bound / 2, res.y);
    int guess = res.ratio.real() >= 0 ? 1 : -1;
    res.residual = static_cast<double>(abs(res.ratio - Complex(guess)));
    res.residual_half = static_cast<double>(abs(half - Complex(guess)));
    bool converging = res.residual <= std::max(0.1 * res.residual_half, 1e-25);
    res.conclusive = res.residual < tol && converging;
    res.sign = res.conclusive ? guess : 0;
    return res;
}

std::string qexp_csv(const QExpansion& f) {
    std::ostringstream os;
    os << "n,a_n,re,im\n";
    os << std::setprecision(20);
    for (long n = 1; n <= f.bound; ++n) {
        const Complex& z = f.approx[n];
        os << n << ',' << f.a[n].str() << ',' << static_cast<long double>(z.real()) << ','
           << static_cast<long double>(z.imag()) << '\n';
    }
    return os.str();
}

}  // namespace muderiv
