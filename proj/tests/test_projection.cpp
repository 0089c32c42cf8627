#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include <rlink/linking.hpp>
#include <rlink/projection.hpp>

#include "helpers.hpp"

using namespace rlink;
using testutil::mk;
using testutil::twisted_cubic;

TEST_CASE("planar conic: empty census, Klein 0 = 0") {
    auto conic = mk({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}}, 2, "conic");
    ToleranceConfig cfg;
    for (int k = 0; k < 3; ++k) {
        Diagram dia;
        try {
            dia = build_diagram(conic, random_center(conic, cfg, 0x1ULL, k), cfg);
        } catch (const NonGenericCenter&) {
            continue;
        }
        CHECK(dia.census.total() == 0);
        auto kr = klein_check(dia);
        CHECK(kr.pass);
        CHECK(kr.lhs == 0);
        CHECK(kr.rhs == 0);
    }
}

TEST_CASE("twisted cubic projections: census closes at 1, Klein holds, both node kinds occur") {
    auto tc = twisted_cubic();
    ToleranceConfig cfg;
    int crunodal = 0, acnodal = 0, tested = 0;
    for (int k = 0; k < 20 && tested < 10; ++k) {
        Diagram dia;
        try {
            dia = build_diagram(tc, random_center(tc, cfg, 0x2ULL, k), cfg);
        } catch (const Error&) {
            continue;
        }
        ++tested;
        CHECK(dia.census.total() == 1);
        CHECK(dia.census.i == 0);
        auto kr = klein_check(dia);
        CHECK(kr.pass);
        if (dia.census.h == 1) {
            ++crunodal;
            // crunodal cubic: F = 1, B = 0
            CHECK(kr.F == 1);
            CHECK(kr.B == 0);
            CHECK(dia.crossings.size() == 1);
        } else {
            ++acnodal;
            // acnodal cubic: F = 3, B = 0
            CHECK(kr.F == 3);
            CHECK(kr.B == 0);
            CHECK(dia.solitary.size() == 1);
        }
    }
    CHECK(tested == 10);
    CHECK(crunodal > 0);
    CHECK(acnodal > 0);
}

TEST_CASE("random degree-4 projections: census h+e+i = 3 with i even") {
    std::mt19937_64 rng(23);
    ToleranceConfig cfg;
    int done = 0;
    for (int trial = 0; trial < 12 && done < 4; ++trial) {
        auto c = testutil::random_curve(4, rng, "rand4");
        try {
            if (!validate_smooth_link(c, cfg).pass) continue;
        } catch (const Error&) {
            continue;
        }
        for (int k = 0; k < 4 && done < 4; ++k) {
            Diagram dia;
            try {
                dia = build_diagram(c, random_center(c, cfg, 0x3ULL, k), cfg);
            } catch (const Error&) {
                continue;
            }
            ++done;
            CHECK(dia.census.total() == 3);
            CHECK(dia.census.i % 2 == 0);
            CHECK(klein_check(dia).pass);
            CHECK(static_cast<int>(dia.crossings.size()) == dia.census.h);
            CHECK(static_cast<int>(dia.solitary.size()) == dia.census.e);
            for (const auto& cr : dia.crossings) CHECK(std::abs(cr.sign) == 1);
            for (const auto& sp : dia.solitary) {
                CHECK(std::abs(sp.sign) == 1);
                CHECK(sp.tau.imag() > 0);
            }
        }
    }
    CHECK(done == 4);
}

TEST_CASE("dual curve of a plane quartic image has degree 2d-2") {
    std::mt19937_64 rng(31);
    ToleranceConfig cfg;
    for (int trial = 0; trial < 10; ++trial) {
        auto c = testutil::random_curve(4, rng, "rand4");
        try {
            if (!validate_smooth_link(c, cfg).pass) continue;
            auto pc = project(c, random_center(c, cfg, 0x4ULL, 0), cfg);
            RowCurve G = gauss_map_rows(pc);
            CHECK(G.degree == 6);
            CHECK(G.rows.size() == 3);
            return;
        } catch (const Error&) {
            continue;
        }
    }
    FAIL("no valid degree-4 curve found");
}

TEST_CASE("blackboard framing: diagram crossing-sign sum equals the push-off self-linking") {
    auto tc = twisted_cubic();
    ToleranceConfig cfg;
    int checked = 0;
    for (int k = 0; k < 8 && checked < 3; ++k) {
        ProjectionCenter p = random_center(tc, cfg, 0x5ULL, k);
        Diagram dia;
        try {
            dia = build_diagram(tc, p, cfg);
        } catch (const Error&) {
            continue;
        }
        HalfInt from_diagram = blackboard_from_diagram(dia);
        HalfInt from_lk = self_linking(tc, FramingKind::blackboard(p), cfg);
        CHECK(from_diagram.twice == from_lk.twice);
        ++checked;
    }
    CHECK(checked == 3);
}

TEST_CASE("projection center on the curve is rejected") {
    auto tc = twisted_cubic();
    ToleranceConfig cfg;
    ProjectionCenter p = ProjectionCenter::normalized(eval_chart(tc, 0.5));
    CHECK_THROWS_AS(project(tc, p, cfg), CenterOnCurve);
}
