#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include <rlink/curve.hpp>

#include "helpers.hpp"

using namespace rlink;
using testutil::mk;
using testutil::twisted_cubic;

TEST_CASE("binary form reparametrization commutes with evaluation") {
    BinaryForm f({3.0, -1.0, 0.5, 2.0});  // degree 3
    Mobius M{0.8, -0.6, 0.6, 0.8};
    BinaryForm g = f.reparam(M);
    for (double tau : {-2.0, -0.3, 0.0, 0.7, 5.0}) {
        auto [s_old, t_old] = M.old_pair(cdouble(1.0), cdouble(tau));
        CHECK(g.eval(1.0, tau) ==
              doctest::Approx(f.eval(s_old.real(), t_old.real())).epsilon(1e-12));
    }
}

TEST_CASE("chart polynomials agree with homogeneous evaluation") {
    BinaryForm f({1.0, 2.0, -3.0});
    CHECK(f.chart_t().eval(0.5).real() == doctest::Approx(f.eval(1.0, 0.5)));
    CHECK(f.chart_s().eval(0.5).real() == doctest::Approx(f.eval(0.5, 1.0)));
    CHECK(f.d_t().eval(1.0, 0.5) == doctest::Approx(2.0 + 2.0 * (-3.0) * 0.5));
}

TEST_CASE("eval_chart returns unit representatives, including infinity") {
    auto tc = twisted_cubic();
    CHECK(eval_chart(tc, 0.7).norm() == doctest::Approx(1.0));
    Eigen::Vector4d at_inf = eval_chart(tc, std::nullopt);
    CHECK(at_inf.norm() == doctest::Approx(1.0));
    CHECK(std::abs(at_inf(3)) == doctest::Approx(1.0));  // (0:0:0:1)
}

TEST_CASE("mirror negates the last coordinate row") {
    auto tc = twisted_cubic();
    auto m = tc.mirror();
    CHECK(m.coords.rows[3].coeff(3) == -1.0);
    CHECK(m.coords.rows[2].coeff(2) == 1.0);
}

TEST_CASE("twisted cubic validates as a smooth embedded link") {
    ToleranceConfig cfg;
    auto rep = validate_smooth_link(twisted_cubic(), cfg);
    CHECK(rep.pass);
    CHECK(rep.structural_ok);
    CHECK(rep.real_node_witnesses.empty());
    CHECK(rep.cusp_params.empty());
}

TEST_CASE("curve with a real node fails validation with the witness pair") {
    // (1 : t^2-1 : t^3-t : t^4): parameters +-1 map to (1:0:0:1)
    auto c = mk({{1, 0, 0, 0, 0}, {-1, 0, 1, 0, 0}, {0, -1, 0, 1, 0}, {0, 0, 0, 0, 1}}, 4,
                "nodal");
    ToleranceConfig cfg;
    auto rep = validate_smooth_link(c, cfg);
    CHECK(!rep.pass);
    REQUIRE(rep.real_node_witnesses.size() >= 1);
    auto w = rep.real_node_witnesses.front();
    CHECK(std::abs(std::abs(w[0]) - 1.0) < 1e-7);
    CHECK(std::abs(std::abs(w[1]) - 1.0) < 1e-7);
    CHECK(std::abs(w[0] + w[1]) < 1e-7);  // the pair is {+1, -1}
}

TEST_CASE("generic random degree-4 curves validate; dense sampling finds no collision") {
    std::mt19937_64 rng(11);
    ToleranceConfig cfg;
    int validated = 0;
    for (int trial = 0; trial < 8 && validated < 3; ++trial) {
        auto c = testutil::random_curve(4, rng, "rand4");
        ValidationReport rep;
        try {
            rep = validate_smooth_link(c, cfg);
        } catch (const Error&) {
            continue;
        }
        if (!rep.pass) continue;
        ++validated;
        // sampling oracle: no two well-separated real parameters map to the
        // same projective point
        const int N = 400;
        std::vector<Eigen::Vector4d> pts;
        for (int i = 0; i < N; ++i) {
            double theta = M_PI * i / N;
            Eigen::VectorXd v = c.coords.eval(std::cos(theta), std::sin(theta));
            pts.push_back(Eigen::Vector4d(v) / v.norm());
        }
        double min_cross = 2.0;
        for (int i = 0; i < N; ++i)
            for (int j = i + 5; j < N && j - i < N - 5; ++j) {
                double d = std::min((pts[i] - pts[j]).norm(), (pts[i] + pts[j]).norm());
                min_cross = std::min(min_cross, d);
            }
        CHECK(min_cross > 1e-3);
    }
    CHECK(validated == 3);
}

TEST_CASE("pair eliminator: nodal quartic space curve yields the real pair {+1,-1}") {
    auto c = mk({{1, 0, 0, 0, 0}, {-1, 0, 1, 0, 0}, {0, -1, 0, 1, 0}, {0, 0, 0, 0, 1}}, 4,
                "nodal");
    ToleranceConfig cfg;
    auto pairs = parameter_pair_collisions(c.coords, cfg, 0x7357ULL, -1);
    bool found = false;
    for (const auto& p : pairs) {
        if (p.cls != PairClass::RealPair) continue;
        double a = p.t1.real(), b = p.t2.real();
        if (std::abs(std::abs(a) - 1.0) < 1e-8 && std::abs(a + b) < 1e-8) found = true;
    }
    CHECK(found);
}

TEST_CASE("torsion sign of the twisted cubic is constant and flips under mirror") {
    ToleranceConfig cfg;
    auto prof = torsion_sign_profile(twisted_cubic(), cfg);
    REQUIRE(!prof.empty());
    for (const auto& iv : prof) CHECK(iv.sign == +1);
    auto prof_m = torsion_sign_profile(twisted_cubic().mirror(), cfg);
    for (const auto& iv : prof_m) CHECK(iv.sign == -1);
}

TEST_CASE("curvature vanishing parameters") {
    ToleranceConfig cfg;
    CHECK(curvature_vanishing_params(twisted_cubic(), cfg).empty());
    // (1 : t : t^3 : t^4 + s-mix for genericity at infinity): curvature
    // vanishes at t = 0 where x'' is parallel to x'
    auto c = mk({{1, 0, 1, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}}, 4,
                "flat0");
    auto zeros = curvature_vanishing_params(c, cfg);
    REQUIRE(zeros.size() >= 1);
    bool at0 = false;
    for (double z : zeros)
        if (std::abs(z) < 1e-7) at0 = true;
    CHECK(at0);
}

TEST_CASE("plane sections of the twisted cubic") {
    ToleranceConfig cfg;
    auto tc = twisted_cubic();
    // x1 = 0 is s^2 t: the points t = 0 and t = infinity (the latter double)
    CHECK(plane_section_count(tc, Eigen::Vector4d(0, 1, 0, 0), cfg) == 2);
    CHECK(plane_section_count(tc, Eigen::Vector4d(0, 1, 0, 0), cfg, true) == 3);
    // x1 - x2 = 0 is s t (s - t): three distinct real points
    CHECK(plane_section_count(tc, Eigen::Vector4d(0, 1, -1, 0), cfg, true) == 3);
    CHECK(min_plane_section_upper_bound(tc, cfg) <= 3);
}
