#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include <rlink/projection.hpp>
#include <rlink/svg.hpp>

#include "helpers.hpp"

using namespace rlink;
using testutil::twisted_cubic;

namespace {

size_t count_of(const std::string& hay, const std::string& needle) {
    size_t n = 0;
    for (size_t p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
    return n;
}

Diagram some_diagram(bool want_solitary) {
    auto tc = twisted_cubic();
    ToleranceConfig cfg;
    for (int k = 0; k < 30; ++k) {
        try {
            Diagram dia = build_diagram(tc, random_center(tc, cfg, 0x9ULL, k), cfg);
            if (want_solitary == (dia.census.e == 1)) return dia;
        } catch (const Error&) {
        }
    }
    throw Error("no suitable diagram found");
}

}  // namespace

TEST_CASE("svg contains the curve, flex ticks, and crossing gaps") {
    Diagram dia = some_diagram(false);
    REQUIRE(dia.census.h == 1);
    std::string svg = render_diagram_svg(dia);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(count_of(svg, "class=\"curve\"") >= 1);
    // one crossing: one white gap disc plus the redrawn over-strand arc
    CHECK(count_of(svg, "class=\"gap\"") == 1);
    CHECK(count_of(svg, "class=\"over\"") == 1);
    // crunodal cubic image has one flex
    CHECK(count_of(svg, "class=\"flex\"") == static_cast<size_t>(dia.flex_total()));
    CHECK(count_of(svg, "class=\"solitary\"") == 0);
}

TEST_CASE("svg marks solitary points") {
    Diagram dia = some_diagram(true);
    std::string svg = render_diagram_svg(dia);
    CHECK(count_of(svg, "class=\"solitary\"") == 1);
    CHECK(count_of(svg, "class=\"gap\"") == 0);
}

TEST_CASE("svg output is deterministic") {
    Diagram dia = some_diagram(false);
    CHECK(render_diagram_svg(dia) == render_diagram_svg(dia));
}
