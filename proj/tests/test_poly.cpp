#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include <rlink/halfint.hpp>
#include <rlink/poly.hpp>

using namespace rlink;

namespace {

Poly from_real(std::vector<double> c) {
    std::vector<cdouble> cc(c.begin(), c.end());
    return Poly(std::move(cc));
}

/// Brute-force real roots: sign-change bisection on a fine grid.
std::vector<double> bisection_real_roots(const Poly& p, double lo, double hi, int grid) {
    std::vector<double> out;
    double prev = p.eval(lo).real();
    double x_prev = lo;
    for (int k = 1; k <= grid; ++k) {
        double x = lo + (hi - lo) * k / grid;
        double val = p.eval(x).real();
        if (prev == 0.0) out.push_back(x_prev);
        else if (prev * val < 0.0) {
            double a = x_prev, b = x, fa = prev;
            for (int it = 0; it < 100; ++it) {
                double m = 0.5 * (a + b), fm = p.eval(m).real();
                if (fa * fm <= 0.0) b = m;
                else { a = m; fa = fm; }
            }
            out.push_back(0.5 * (a + b));
        }
        prev = val;
        x_prev = x;
    }
    return out;
}

/// Argument-principle winding of p around a square contour centered at z0.
int winding_on_square(const Poly& p, cdouble z0, double half, int per_side = 400) {
    const Poly dp = p.derivative();
    cdouble corners[5] = {z0 + cdouble(-half, -half), z0 + cdouble(half, -half),
                          z0 + cdouble(half, half), z0 + cdouble(-half, half),
                          z0 + cdouble(-half, -half)};
    cdouble acc = 0.0;
    for (int s = 0; s < 4; ++s) {
        for (int k = 0; k < per_side; ++k) {
            double a = static_cast<double>(k) / per_side;
            double b = static_cast<double>(k + 1) / per_side;
            cdouble za = corners[s] * (1.0 - a) + corners[s + 1] * a;
            cdouble zb = corners[s] * (1.0 - b) + corners[s + 1] * b;
            cdouble zm = 0.5 * (za + zb);
            acc += dp.eval(zm) / p.eval(zm) * (zb - za);
        }
    }
    return static_cast<int>(std::lround((acc / cdouble(0.0, 2.0 * M_PI)).real()));
}

}  // namespace

TEST_CASE("factored polynomial with a double root and complex pair") {
    // (t-1)^2 (t^2+4) (t+5) = t^5+3t^4-5t^3+17t^2-36t+20
    Poly p = from_real({20, -36, 17, -5, 3, 1});
    ToleranceConfig cfg;
    auto rr = real_roots_with_multiplicity(p, cfg);
    REQUIRE(rr.size() == 2);
    CHECK(rr[0].first == doctest::Approx(-5.0).epsilon(1e-9));
    CHECK(rr[0].second == 1);
    CHECK(rr[1].first == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rr[1].second == 2);

    auto clusters = find_roots(p, cfg);
    int total = 0;
    bool saw_2i = false;
    for (const auto& c : clusters) {
        total += c.multiplicity;
        if (std::abs(c.center - cdouble(0.0, 2.0)) < 1e-8) saw_2i = true;
    }
    CHECK(total == 5);
    CHECK(saw_2i);
}

TEST_CASE("random degree-8 roots match bisection + argument-principle oracle") {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> g(0.0, 1.0);
    ToleranceConfig cfg;
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> c(9);
        for (auto& x : c) x = g(rng);
        Poly p = from_real(c);
        auto clusters = find_roots(p, cfg);
        int total = 0;
        for (const auto& cl : clusters) total += cl.multiplicity;
        CHECK(total == 8);

        // real roots against sign-change bisection
        std::vector<double> found_real;
        for (const auto& cl : clusters)
            if (cl.center.imag() == 0.0) found_real.push_back(cl.center.real());
        std::sort(found_real.begin(), found_real.end());
        // Cauchy bound so the oracle window contains every root
        double bound = 0.0;
        for (int k = 0; k < 8; ++k) bound = std::max(bound, std::abs(p.coeff(k) / p.coeff(8)));
        bound += 1.0;
        auto oracle = bisection_real_roots(p, -bound, bound, 400000);
        REQUIRE(found_real.size() == oracle.size());
        for (size_t i = 0; i < oracle.size(); ++i)
            CHECK(std::abs(found_real[i] - oracle[i]) < 1e-8);

        // each cluster verified by the winding number on a surrounding box
        for (const auto& cl : clusters) {
            int w = winding_on_square(p, cl.center, 1e-3);
            CHECK(w == cl.multiplicity);
        }
    }
}

TEST_CASE("roots survive numerically-dead leading coefficients") {
    // (t-2)(t+3) plus cancellation residue in the top coefficients
    Poly p(std::vector<cdouble>{-6.0, 1.0, 1.0, 1e-17, -3e-18});
    ToleranceConfig cfg;
    auto clusters = find_roots(p, cfg);
    std::vector<double> roots;
    for (const auto& c : clusters) roots.push_back(c.center.real());
    std::sort(roots.begin(), roots.end());
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] == doctest::Approx(-3.0).epsilon(1e-10));
    CHECK(roots[1] == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("polynomial reconstruction from computed roots") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g(0.0, 1.0);
    ToleranceConfig cfg;
    std::vector<double> c(7);
    for (auto& x : c) x = g(rng);
    Poly p = from_real(c);
    auto clusters = find_roots(p, cfg);
    Poly q = Poly::constant(p.leading());
    for (const auto& cl : clusters)
        for (int m = 0; m < cl.multiplicity; ++m)
            q = q * Poly(std::vector<cdouble>{-cl.center, 1.0});
    REQUIRE(q.degree() == p.degree());
    for (int k = 0; k <= p.degree(); ++k)
        CHECK(std::abs(q.coeff(k) - p.coeff(k)) < 1e-8 * p.max_abs_coeff());
}

TEST_CASE("resultant vanishes exactly on shared roots") {
    Poly p = from_real({-2, 1});        // t - 2
    Poly q = from_real({-6, 1, 1});     // (t-2)(t+3)
    Poly r = from_real({-5, 1});        // t - 5
    CHECK(std::abs(resultant(p, q)) < 1e-12);
    // res(t-2, t-5) = 2 - 5 = -3 up to sign convention
    CHECK(std::abs(std::abs(resultant(p, r)) - 3.0) < 1e-12);
}

TEST_CASE("half-integer rounding and formatting") {
    CHECK(HalfInt::round(0.5).twice == 1);
    CHECK(HalfInt::round(-1.52).twice == -3);
    CHECK(HalfInt::round(2.04).twice == 4);
    CHECK_THROWS_AS(HalfInt::round(0.74), RoundingUnsafe);
    CHECK(HalfInt(3).str() == "3/2");
    CHECK(HalfInt(-3).str() == "-3/2");
    CHECK(HalfInt::whole(2).str() == "2");
    CHECK(HalfInt(3).is_integer() == false);
    CHECK((-HalfInt(3)).twice == -3);
    CHECK((HalfInt(3) + HalfInt(1)).twice == 4);
    CHECK(HalfInt(-5).abs().twice == 5);
}
