#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include <rlink/linking.hpp>

#include "helpers.hpp"

using namespace rlink;
using testutil::mk;
using testutil::twisted_cubic;

namespace {

ParamSpaceCurve line_a() { return mk({{1, 0}, {0, 1}, {0, 0}, {0, 0}}, 1, "La"); }
ParamSpaceCurve line_b() { return mk({{0, 0}, {0, 0}, {1, 0}, {0, 1}}, 1, "Lb"); }

}  // namespace

TEST_CASE("two disjoint lines in RP^3 link with a half unit") {
    ToleranceConfig cfg;
    double raw = 0.0;
    HalfInt v = lk(line_a(), line_b(), cfg, &raw);
    CHECK(std::abs(v.twice) == 1);
    CHECK(std::abs(raw - v.value()) < 1e-4);
}

TEST_CASE("lk is symmetric") {
    ToleranceConfig cfg;
    CHECK(lk(line_a(), line_b(), cfg).twice == lk(line_b(), line_a(), cfg).twice);
}

TEST_CASE("orientation reversal negates lk") {
    ToleranceConfig cfg;
    auto lb = line_b();
    HalfInt v = lk(line_a(), lb, cfg);
    lb.orientation = -lb.orientation;
    CHECK(lk(line_a(), lb, cfg).twice == -v.twice);
}

TEST_CASE("mirror image negates lk") {
    ToleranceConfig cfg;
    HalfInt v = lk(line_a(), line_b(), cfg);
    CHECK(lk(line_a(), line_b().mirror(), cfg).twice == -v.twice);
}

TEST_CASE("split round circles have lk = 0") {
    ToleranceConfig cfg;
    // radius-0.2 circles in disjoint affine balls
    auto c1 = mk({{1, 0, 1}, {0.2, 0, -0.2}, {0, 0.4, 0}, {0, 0, 0}}, 2, "c1");
    auto c2 = mk({{1, 0, 1}, {0.9, 0, 0.9}, {0.2, 0, -0.2}, {0, 0.4, 0}}, 2, "c2");
    double raw = 0.0;
    CHECK(lk(c1, c2, cfg, &raw).twice == 0);
    CHECK(std::abs(raw) < 1e-4);
}

TEST_CASE("lift produces full preimages with the right closure type") {
    ToleranceConfig cfg;
    // a line has odd homology class: one doubled loop closed by antipody
    auto loops_line = lift(line_a(), cfg);
    REQUIRE(loops_line.size() == 1);
    for (const auto& s : loops_line.front().samples)
        CHECK(std::abs(s.norm() - 1.0) < 1e-9);
    // an affine circle is even: two antipodal loops
    auto circle = mk({{1, 0, 1}, {0.2, 0, -0.2}, {0, 0.4, 0}, {0, 0, 0}}, 2, "c");
    auto loops_circle = lift(circle, cfg);
    CHECK(loops_circle.size() == 2);
}

TEST_CASE("osculating self-linking of the twisted cubic is 3/2, mirror is -3/2") {
    ToleranceConfig cfg;
    double raw = 0.0;
    HalfInt v = self_linking(twisted_cubic(), FramingKind::osculating(), cfg, &raw);
    CHECK(v.twice == 3);
    CHECK(std::abs(raw - 1.5) < 0.05);
    CHECK(self_linking(twisted_cubic().mirror(), FramingKind::osculating(), cfg).twice == -3);
}

TEST_CASE("half-integer rounding guards unstable raw values") {
    CHECK_THROWS_AS(HalfInt::round(0.3, 0.1), RoundingUnsafe);
    CHECK(HalfInt::round(0.48, 0.1).twice == 1);
}
