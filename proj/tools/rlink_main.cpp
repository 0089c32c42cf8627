#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rlink/curve.hpp"
#include "rlink/errors.hpp"
#include "rlink/invariants.hpp"
#include "rlink/io.hpp"
#include "rlink/linking.hpp"
#include "rlink/projection.hpp"
#include "rlink/svg.hpp"

namespace {

using nlohmann::json;
using namespace rlink;

constexpr std::uint64_t kCliCenterSalt = 0xC11AULL;

std::string half_str(HalfInt h) {
    if (h.twice % 2 == 0) return std::to_string(h.twice / 2);
    return std::to_string(h.twice) + "/2";
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write file: " + path);
    out << content;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json config_json(const ToleranceConfig& cfg) {
    return {{"root_tol", cfg.root_tol},
            {"cluster_tol", cfg.cluster_tol},
            {"geom_tol", cfg.geom_tol},
            {"quad_step", cfg.quad_step},
            {"seed", cfg.seed}};
}

json klein_json(const KleinReport& k) {
    return {{"F", k.F},   {"B", k.B},     {"h", k.h},     {"i", k.i},
            {"d", k.d},   {"lhs", k.lhs}, {"rhs", k.rhs}, {"pass", k.pass}};
}

json diagram_json(const Diagram& dia, HalfInt bp) {
    json crossings = json::array();
    for (const auto& cr : dia.crossings) crossings.push_back(cr.sign);
    json solitary = json::array();
    for (const auto& sp : dia.solitary) solitary.push_back(sp.sign);
    json center = json::array();
    for (int k = 0; k < 4; ++k) center.push_back(dia.center.point(k));
    return {{"center_raw", center},
            {"census", {{"h", dia.census.h}, {"e", dia.census.e}, {"i", dia.census.i}}},
            {"crossing_signs", crossings},
            {"solitary_signs", solitary},
            {"flex_total", dia.flex_total()},
            {"bitangents", dia.bitangent_count},
            {"blackboard_twice_value", bp.twice}};
}

/// Collects `want` diagrams from seeded generic centers, skipping draws that
/// the pipeline rejects.
std::vector<Diagram> collect_diagrams(const ParamSpaceCurve& curve, const ToleranceConfig& cfg,
                                      int want) {
    std::vector<Diagram> out;
    for (int k = 0; k < 12 * want && static_cast<int>(out.size()) < want; ++k) {
        try {
            out.push_back(build_diagram(curve, random_center(curve, cfg, kCliCenterSalt, k), cfg));
        } catch (const Error&) {
            continue;
        }
    }
    return out;
}

int cmd_analyze(const std::string& path, int centers, const ToleranceConfig& cfg,
                const std::string& report_path, const std::string& svg_path) {
    json input_echo;
    ParamSpaceCurve curve = [&] {
        std::string text = read_text(path);
        input_echo = json::parse(text);
        return curve_from_json_text(text);
    }();

    json report;
    report["input"] = input_echo;
    report["versions"] = {{"spec", "1"}};
    report["config"] = config_json(cfg);

    std::string first_failure;
    auto fail = [&](const std::string& name) {
        if (first_failure.empty()) first_failure = name;
    };

    ValidationReport val = validate_smooth_link(curve, cfg);
    report["validation"] = {{"pass", val.pass},
                            {"structural_ok", val.structural_ok},
                            {"message", val.message}};
    if (!val.real_node_witnesses.empty()) {
        json w = json::array();
        for (const auto& pr : val.real_node_witnesses) w.push_back({pr[0], pr[1]});
        report["validation"]["witness"] = w;
    }
    if (!val.pass) {
        fail("validation");
        report["first_failure"] = first_failure;
        if (!report_path.empty()) write_text(report_path, report.dump(2) + "\n");
        std::cerr << "validation failed: " << val.message << "\n";
        return 2;
    }

    std::vector<Diagram> diagrams = collect_diagrams(curve, cfg, centers);
    if (diagrams.empty()) {
        fail("diagrams");
        report["first_failure"] = first_failure;
        if (!report_path.empty()) write_text(report_path, report.dump(2) + "\n");
        std::cerr << "no generic projection center accepted\n";
        return 2;
    }

    report["diagrams"] = json::array();
    report["klein"] = json::array();
    for (const auto& dia : diagrams) {
        HalfInt bp = blackboard_from_diagram(dia);
        report["diagrams"].push_back(diagram_json(dia, bp));
        KleinReport kr = klein_check(dia);
        report["klein"].push_back(klein_json(kr));
        if (!kr.pass) fail("klein");
    }

    try {
        HalfInt osc = self_linking(curve, FramingKind::osculating(), cfg);
        report["osc"] = {{"twice_value", osc.twice}};
    } catch (const Error& e) {
        report["osc"] = {{"error", e.what()}};
        fail("osc");
    }

    try {
        std::vector<ProjectionCenter> pcs;
        pcs.reserve(diagrams.size());
        for (const auto& dia : diagrams) pcs.push_back(dia.center);
        WritheResult w = encomplexed_writhe(curve, pcs, cfg);
        json per = json::array();
        for (const auto& c : w.per_center)
            per.push_back({{"real_part", c.real_part}, {"solitary_part", c.solitary_part}});
        report["wlambda"] = {{"value", w.value},
                             {"independent", w.independent},
                             {"per_center", per}};
        if (!w.independent) fail("wlambda.independent");
    } catch (const Error& e) {
        report["wlambda"] = {{"error", e.what()}};
        fail("wlambda");
    }

    try {
        Theorem1Report t1 = theorem1_check(curve, cfg);
        report["theorem1"] = {{"osc_twice_value", t1.osc_value.twice},
                              {"bound_twice_value", t1.bound.twice},
                              {"tight", t1.tight},
                              {"mw_verdict", t1.mw_verdict},
                              {"torsion_positive", t1.torsion_positive},
                              {"sign_constancy", t1.sign_constancy},
                              {"flexes_simple", t1.flexes_simple},
                              {"orientation_is_complex", t1.orientation_is_complex},
                              {"centers_checked", t1.centers_checked}};
    } catch (const Error& e) {
        report["theorem1"] = {{"error", e.what()}};
        fail("theorem1");
    }

    report["walls"] = json::array();  // populated by the family command only
    if (!first_failure.empty()) report["first_failure"] = first_failure;

    if (!svg_path.empty()) write_text(svg_path, render_diagram_svg(diagrams.front()));
    if (!report_path.empty()) write_text(report_path, report.dump(2) + "\n");

    if (!first_failure.empty()) {
        std::cerr << "invariant failure: " << first_failure << "\n";
        return 2;
    }
    std::cout << "osc = " << half_str(HalfInt(report["osc"]["twice_value"].get<long long>()))
              << ", w_lambda = " << report["wlambda"]["value"].get<int>() << ", diagrams = "
              << diagrams.size() << ", all checks pass\n";
    return 0;
}

int cmd_klein(const std::string& path, int centers, const ToleranceConfig& cfg) {
    ParamSpaceCurve curve = load_curve_file(path);
    std::vector<Diagram> diagrams = collect_diagrams(curve, cfg, centers);
    if (diagrams.empty()) {
        std::cerr << "no generic projection center accepted\n";
        return 2;
    }
    bool all_pass = true;
    for (const auto& dia : diagrams) {
        KleinReport k = klein_check(dia);
        std::printf("F=%d B=%d h=%d i=%d : %d = %d %s\n", k.F, k.B, k.h, k.i, k.lhs, k.rhs,
                    k.pass ? "PASS" : "FAIL");
        all_pass = all_pass && k.pass;
    }
    return all_pass ? 0 : 2;
}

int cmd_lk(const std::string& path_a, const std::string& path_b, const ToleranceConfig& cfg) {
    ParamSpaceCurve a = load_curve_file(path_a);
    ParamSpaceCurve b = load_curve_file(path_b);
    HalfInt v = lk(a, b, cfg);
    std::cout << "lk = " << half_str(v) << "\n";
    return 0;
}

const char* kind_name(WallEvent::Kind k) {
    switch (k) {
        case WallEvent::First: return "First";
        case WallEvent::Second: return "Second";
        case WallEvent::Third: return "Third";
        default: return "Unknown";
    }
}

int cmd_family(const std::string& path, int steps, const ToleranceConfig& cfg,
               const std::string& report_path) {
    FamilySpec family = load_family_file(path);
    std::vector<WallEvent> events = family_scan(family, cfg, steps);
    bool ok = true;
    json walls = json::array();
    for (const auto& ev : events) {
        std::printf("wall lambda in [%.10g, %.10g]  kind=%s  d_wlambda=%d  d_osc=%s\n",
                    ev.lambda_lo, ev.lambda_hi, kind_name(ev.kind), ev.d_wlambda,
                    half_str(ev.d_osc).c_str());
        // per-event jump assertions: first-kind walls move both invariants by 2
        if (ev.kind == WallEvent::First &&
            (std::abs(ev.d_wlambda) != 2 || std::abs(ev.d_osc.twice) != 4))
            ok = false;
        if (ev.kind == WallEvent::Third && ev.d_osc.twice == 0) ok = false;
        if (ev.d_wlambda % 2 != 0) ok = false;
        walls.push_back({{"lambda_lo", ev.lambda_lo},
                         {"lambda_hi", ev.lambda_hi},
                         {"d_wlambda", ev.d_wlambda},
                         {"d_osc_twice_value", ev.d_osc.twice},
                         {"kind", kind_name(ev.kind)}});
    }
    if (!report_path.empty()) {
        json report;
        report["input"] = json::parse(read_text(path));
        report["versions"] = {{"spec", "1"}};
        report["config"] = config_json(cfg);
        report["walls"] = walls;
        write_text(report_path, report.dump(2) + "\n");
    }
    if (!ok) {
        std::cerr << "wall jump assertion failed\n";
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"invariants of real algebraic links in RP^3 from rational parametrizations"};
    app.require_subcommand(1);

    int centers = 10;
    std::uint64_t seed = 0;
    double tol = 0.0;
    int steps = 100;
    std::string report_path, svg_path, path_a, path_b;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--seed", seed, "seed for all randomized choices");
        c->add_option("--tol", tol, "geometric coincidence tolerance override");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "full invariant pipeline on one curve");
    analyze->add_option("curve", path_a, "curve JSON file")->required();
    analyze->add_option("--centers", centers, "number of projection centers");
    analyze->add_option("--report", report_path, "write the JSON report here");
    analyze->add_option("--svg", svg_path, "write an SVG of the first diagram here");
    add_common(analyze);

    CLI::App* klein = app.add_subcommand("klein", "inflection/bitangent count identity checks");
    klein->add_option("curve", path_a, "curve JSON file")->required();
    klein->add_option("--centers", centers, "number of projection centers");
    add_common(klein);

    CLI::App* lkc = app.add_subcommand("lk", "linking number of two disjoint curves");
    lkc->add_option("curveA", path_a, "first curve JSON file")->required();
    lkc->add_option("curveB", path_b, "second curve JSON file")->required();
    add_common(lkc);

    CLI::App* fam = app.add_subcommand("family", "scan a one-parameter family for walls");
    fam->add_option("family", path_a, "family JSON file")->required();
    fam->add_option("--steps", steps, "lambda grid steps");
    fam->add_option("--report", report_path, "write the JSON report here");
    add_common(fam);

    CLI11_PARSE(app, argc, argv);

    ToleranceConfig cfg;
    cfg.seed = seed;
    if (tol > 0.0) cfg.geom_tol = tol;

    try {
        if (app.got_subcommand(analyze))
            return cmd_analyze(path_a, centers, cfg, report_path, svg_path);
        if (app.got_subcommand(klein)) return cmd_klein(path_a, centers, cfg);
        if (app.got_subcommand(lkc)) return cmd_lk(path_a, path_b, cfg);
        if (app.got_subcommand(fam)) return cmd_family(path_a, steps, cfg, report_path);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "computation failed: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
