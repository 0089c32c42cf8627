#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>

#include <rlink/invariants.hpp>
#include <rlink/projection.hpp>

#include "helpers.hpp"

using namespace rlink;
using testutil::twisted_cubic;

TEST_CASE("encomplexed writhe of the twisted cubic is +1 and center-independent") {
    ToleranceConfig cfg;
    auto tc = twisted_cubic();
    std::vector<ProjectionCenter> centers;
    for (int k = 0; centers.size() < 10 && k < 40; ++k) {
        auto p = random_center(tc, cfg, 0x77ULL, k);
        try {
            build_diagram(tc, p, cfg);
        } catch (const Error&) {
            continue;
        }
        centers.push_back(p);
    }
    REQUIRE(centers.size() == 10);
    auto w = encomplexed_writhe(tc, centers, cfg);
    CHECK(w.value == 1);
    CHECK(w.independent);
    for (const auto& c : w.per_center) CHECK(c.total() == 1);
    // mirror negates
    auto wm = encomplexed_writhe(tc.mirror(), centers, cfg);
    CHECK(wm.value == -1);
}

TEST_CASE("theorem check on the twisted cubic and its mirror") {
    ToleranceConfig cfg;
    auto r = theorem1_check(twisted_cubic(), cfg, 6);
    CHECK(r.osc_value.twice == 3);
    CHECK(r.bound.twice == 3);
    CHECK(r.tight);
    CHECK(r.mw_verdict);
    CHECK(r.torsion_positive);
    CHECK(r.sign_constancy);
    CHECK(r.flexes_simple);
    CHECK(r.orientation_is_complex);
    CHECK(r.centers_checked == 6);

    auto rm = theorem1_check(twisted_cubic().mirror(), cfg, 6);
    CHECK(rm.osc_value.twice == -3);
    CHECK(rm.tight);
    // torsion sign is constant and agrees with the (negative) sign of osc
    CHECK(rm.torsion_positive);
}

TEST_CASE("Murasugi and Harnack bounds on twisted cubic diagrams") {
    ToleranceConfig cfg;
    auto tc = twisted_cubic();
    std::vector<Diagram> diagrams;
    for (int k = 0; diagrams.size() < 6 && k < 30; ++k) {
        try {
            diagrams.push_back(build_diagram(tc, random_center(tc, cfg, 0x78ULL, k), cfg));
        } catch (const Error&) {
        }
    }
    REQUIRE(diagrams.size() == 6);
    auto mh = murasugi_harnack_checks(tc, diagrams, cfg);
    CHECK(mh.murasugi_checked);
    CHECK(mh.murasugi_ok);
    CHECK(mh.a == 1);  // d - 2
    CHECK(mh.harnack_ok);
}

TEST_CASE("family evaluation is polynomial in lambda") {
    FamilySpec fam;
    fam.label = "f";
    fam.degree = 1;
    // row0 = (2 + 3 lambda) s + t; row1 = s; rows 2,3 = t, s
    fam.entry_poly = {{{2, 3}, {1}}, {{1}, {0}}, {{0}, {1}}, {{1}, {0}}};
    fam.lo = -1;
    fam.hi = 1;
    auto c = fam.curve_at(0.5);
    CHECK(c.degree() == 1);
    CHECK(c.coords.rows[0].coeff(0) == doctest::Approx(3.5));
    CHECK(c.coords.rows[0].coeff(1) == doctest::Approx(1.0));
    CHECK(c.coords.rows[2].coeff(1) == doctest::Approx(1.0));
}

TEST_CASE("worker count honors RLINK_THREADS") {
    setenv("RLINK_THREADS", "3", 1);
    CHECK(worker_count() == 3);
    setenv("RLINK_THREADS", "1", 1);
    CHECK(worker_count() == 1);
    unsetenv("RLINK_THREADS");
    CHECK(worker_count() >= 1);
}
