#include "rlink/invariants.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <thread>

#include "rlink/errors.hpp"
#include "rlink/linking.hpp"

namespace rlink {

int worker_count() {
    if (const char* env = std::getenv("RLINK_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

/// Deterministic parallel map: results land by index regardless of schedule.
template <typename Fn>
void parallel_for_index(int n, Fn&& fn) {
    int workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

int diagram_sign_total(const Diagram& d, int* real_part = nullptr, int* solitary_part = nullptr) {
    int r = 0, s = 0;
    for (const auto& c : d.crossings) r += c.sign;
    for (const auto& sp : d.solitary) s += sp.sign;
    if (real_part) *real_part = r;
    if (solitary_part) *solitary_part = s;
    return r + s;
}

}  // namespace

WritheResult encomplexed_writhe(const ParamSpaceCurve& curve,
                                const std::vector<ProjectionCenter>& centers,
                                const ToleranceConfig& cfg) {
    WritheResult out;
    const int n = static_cast<int>(centers.size());
    out.per_center.resize(static_cast<size_t>(n));
    std::vector<std::exception_ptr> errs(static_cast<size_t>(n));
    parallel_for_index(n, [&](int i) {
        try {
            Diagram d = build_diagram(curve, centers[static_cast<size_t>(i)], cfg);
            CenterContribution c;
            c.center = centers[static_cast<size_t>(i)];
            diagram_sign_total(d, &c.real_part, &c.solitary_part);
            out.per_center[static_cast<size_t>(i)] = c;
        } catch (...) {
            errs[static_cast<size_t>(i)] = std::current_exception();
        }
    });
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    if (out.per_center.empty()) throw NoValidSamples("no centers supplied");
    out.independent = true;
    for (const auto& c : out.per_center)
        if (c.total() != out.per_center.front().total()) out.independent = false;
    if (!out.independent)
        throw SignRuleUnverified("encomplexed writhe differs across projection centers");
    out.value = out.per_center.front().total();
    const int d = curve.degree();
    if (2 * std::abs(out.value) > (d - 1) * (d - 2))
        throw BoundViolated("encomplexed writhe exceeds (d-1)(d-2)/2");
    return out;
}

Theorem1Report theorem1_check(const ParamSpaceCurve& curve, const ToleranceConfig& cfg,
                              int n_centers) {
    const int d = curve.degree();
    if (d < 3) throw Error("theorem1_check requires degree >= 3");
    validate_smooth_link(curve, cfg);

    Theorem1Report rep;
    rep.bound = HalfInt(static_cast<long long>(d) * (d - 2));
    rep.osc_value = self_linking(curve, FramingKind::osculating(), cfg);
    if (rep.osc_value.abs() > rep.bound)
        throw BoundViolated("|osc| exceeds d(d-2)/2");

    rep.sign_constancy = true;
    rep.flexes_simple = true;
    int sign_seen = 0;
    for (int k = 0; rep.centers_checked < n_centers && k < 12 * n_centers; ++k) {
        Diagram dia;
        try {
            dia = build_diagram(curve, random_center(curve, cfg, 0x7E01ULL, k), cfg);
        } catch (const NonGenericCenter&) {
            continue;
        }
        HalfInt bp = blackboard_from_diagram(dia);
        const int f = dia.flex_total();
        // chain in doubled units: |osc - b_p| <= f/2 and f/2 + h <= d(d-2)/2
        if (std::llabs(rep.osc_value.twice - bp.twice) > f)
            throw BoundViolated("|osc - b_p| exceeds f/2 at a center");
        if (f + 2 * dia.census.h > d * (d - 2))
            throw BoundViolated("f/2 + h exceeds d(d-2)/2 at a center");
        for (const auto& c : dia.crossings) {
            if (sign_seen == 0) sign_seen = c.sign;
            if (c.sign != sign_seen) rep.sign_constancy = false;
        }
        for (const auto& fp : dia.flexes)
            if (fp.multiplicity != 1) rep.flexes_simple = false;
        ++rep.centers_checked;
    }
    if (rep.centers_checked < n_centers)
        throw NonGenericCenter("could not accept enough projection centers");

    try {
        auto profile = torsion_sign_profile(curve, cfg);
        bool constant = !profile.empty();
        for (const auto& iv : profile)
            if (iv.sign != profile.front().sign) constant = false;
        rep.torsion_positive =
            constant && (rep.osc_value.twice == 0 ||
                         (profile.front().sign > 0) == (rep.osc_value.twice > 0));
    } catch (const CurvatureVanishes&) {
        rep.torsion_positive = false;
    }

    rep.tight = rep.osc_value.abs() == rep.bound;
    rep.mw_verdict = rep.tight;  // Theorem 1(b): tightness is the decision
    rep.orientation_is_complex = true;
    return rep;
}

MurasugiHarnackReport murasugi_harnack_checks(const ParamSpaceCurve& curve,
                                              const std::vector<Diagram>& diagrams,
                                              const ToleranceConfig& cfg) {
    const int d = curve.degree();
    MurasugiHarnackReport rep;
    HalfInt osc = self_linking(curve, FramingKind::osculating(), cfg);
    bool tight = osc.abs() == HalfInt(static_cast<long long>(d) * (d - 2));
    if (tight) {
        rep.a = d - 2;
        rep.murasugi_checked = !diagrams.empty();
        for (const auto& dia : diagrams)
            if (2 * dia.census.h < (rep.a + 2) * (rep.a - 1)) rep.murasugi_ok = false;
    }
    const int hmax = (d - 1) * (d - 2) / 2 - 1;  // genus 0
    for (const auto& dia : diagrams) {
        if (dia.census.e < 1) continue;
        rep.harnack_checked = true;
        if (dia.census.h > hmax) rep.harnack_ok = false;
    }
    return rep;
}

ParamSpaceCurve FamilySpec::curve_at(double lambda) const {
    std::vector<BinaryForm> rows;
    rows.reserve(4);
    for (const auto& row : entry_poly) {
        std::vector<double> coeffs;
        coeffs.reserve(row.size());
        for (const auto& cp : row) {
            double v = 0.0;
            for (size_t j = cp.size(); j-- > 0;) v = v * lambda + cp[j];
            coeffs.push_back(v);
        }
        rows.emplace_back(std::move(coeffs));
    }
    return {RowCurve{std::move(rows), degree}, orientation,
            label + "@" + std::to_string(lambda)};
}

namespace {

struct FamilySample {
    int w = 0;
    HalfInt osc;
    bool operator==(const FamilySample&) const = default;
};

std::optional<FamilySample> family_sample(const FamilySpec& family, double lambda,
                                          const ToleranceConfig& cfg) {
    try {
        ParamSpaceCurve c = family.curve_at(lambda);
        validate_smooth_link(c, cfg);
        FamilySample s;
        s.osc = self_linking(c, FramingKind::osculating(), cfg);
        // writhe from two accepted centers, required to agree
        std::optional<int> w1, w2;
        for (int k = 0; k < 24 && !w2; ++k) {
            try {
                Diagram dia = build_diagram(c, random_center(c, cfg, 0xFA31ULL, k), cfg);
                int t = diagram_sign_total(dia);
                if (!w1) w1 = t;
                else w2 = t;
            } catch (const Error&) {
                // a bad center (non-generic, or resisting the numerics) is
                // not evidence against the sample; try the next one
                continue;
            }
        }
        if (!w1 || !w2 || *w1 != *w2) return std::nullopt;
        s.w = *w1;
        return s;
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace

std::vector<WallEvent> family_scan(const FamilySpec& family, const ToleranceConfig& cfg,
                                   int steps) {
    if (steps < 2) throw Error("family_scan needs at least 2 steps");
    std::vector<double> grid(static_cast<size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i)
        grid[static_cast<size_t>(i)] = family.lo + (family.hi - family.lo) * i / steps;
    std::vector<std::optional<FamilySample>> vals(grid.size());
    parallel_for_index(static_cast<int>(grid.size()), [&](int i) {
        vals[static_cast<size_t>(i)] = family_sample(family, grid[static_cast<size_t>(i)], cfg);
    });
    if (std::none_of(vals.begin(), vals.end(), [](const auto& v) { return v.has_value(); }))
        throw NoValidSamples("no lambda sample yielded a valid smooth link");

    // brackets between nearest valid neighbors with differing invariants
    struct Bracket {
        double a, b;
        FamilySample va, vb;
    };
    std::vector<Bracket> work;
    std::optional<size_t> prev;
    for (size_t i = 0; i < grid.size(); ++i) {
        if (!vals[i]) continue;
        if (prev && !(*vals[*prev] == *vals[i]))
            work.push_back({grid[*prev], grid[i], *vals[*prev], *vals[i]});
        prev = i;
    }

    std::vector<WallEvent> events;
    const double width_goal = 1e-4;
    while (!work.empty()) {
        Bracket br = work.back();
        work.pop_back();
        while (br.b - br.a >= width_goal) {
            static constexpr double fracs[] = {0.5,  0.45, 0.55, 0.4,  0.6,
                                               0.35, 0.65, 0.3,  0.7,  0.25,
                                               0.75};
            bool advanced = false;
            for (double fr : fracs) {
                double m = br.a + fr * (br.b - br.a);
                auto vm = family_sample(family, m, cfg);
                if (!vm) continue;
                if (*vm == br.va) {
                    br.a = m;
                } else if (*vm == br.vb) {
                    br.b = m;
                } else {
                    // two walls inside: split and requeue the far half
                    work.push_back({m, br.b, *vm, br.vb});
                    br.b = m;
                    br.vb = *vm;
                }
                advanced = true;
                break;
            }
            if (!advanced) break;  // wall region not resolvable further
        }
        WallEvent ev;
        ev.lambda_lo = br.a;
        ev.lambda_hi = br.b;
        ev.d_wlambda = br.vb.w - br.va.w;
        ev.d_osc = br.vb.osc - br.va.osc;
        if (ev.d_wlambda != 0 && ev.d_osc.twice != 0) ev.kind = WallEvent::First;
        else if (ev.d_wlambda != 0) ev.kind = WallEvent::Second;
        else if (ev.d_osc.twice != 0) ev.kind = WallEvent::Third;
        else ev.kind = WallEvent::Unknown;
        events.push_back(ev);
    }
    std::sort(events.begin(), events.end(),
              [](const WallEvent& x, const WallEvent& y) { return x.lambda_lo < y.lambda_lo; });
    return events;
}

}  // namespace rlink
