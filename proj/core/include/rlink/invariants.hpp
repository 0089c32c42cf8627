#pragma once

#include <string>
#include <vector>

#include "rlink/config.hpp"
#include "rlink/curve.hpp"
#include "rlink/halfint.hpp"
#include "rlink/projection.hpp"

namespace rlink {

/// Per-center contribution to the encomplexed writhe.
struct CenterContribution {
    ProjectionCenter center;
    int real_part = 0;      // sum of crossing signs
    int solitary_part = 0;  // sum of solitary-point signs
    int total() const { return real_part + solitary_part; }
};

struct WritheResult {
    int value = 0;
    std::vector<CenterContribution> per_center;
    bool independent = false;
};

/// Sum of crossing and solitary-point signs per center; the totals must agree
/// across centers (projection independence).  Throws SignRuleUnverified when
/// they do not -- disagreement signals a sign-convention bug.
WritheResult encomplexed_writhe(const ParamSpaceCurve& curve,
                                const std::vector<ProjectionCenter>& centers,
                                const ToleranceConfig& cfg);

struct Theorem1Report {
    HalfInt osc_value;
    HalfInt bound;  // d(d-2)/2
    bool tight = false;
    bool mw_verdict = false;
    bool torsion_positive = false;
    bool sign_constancy = false;
    bool flexes_simple = false;
    bool orientation_is_complex = true;  // structural for rational curves
    int centers_checked = 0;
};

/// Computes the osculating self-linking, asserts the degree bound and the
/// per-center chain |osc| <= |osc - b_p| + |b_p| <= f/2 + h <= d(d-2)/2,
/// and reports tightness plus its corroborating necessary conditions.
Theorem1Report theorem1_check(const ParamSpaceCurve& curve, const ToleranceConfig& cfg,
                              int n_centers = 10);

struct MurasugiHarnackReport {
    bool murasugi_checked = false;  // needs tightness (a = d-2 known only then)
    bool murasugi_ok = true;        // 2h >= (a+2)(a-1) on every diagram
    bool harnack_checked = false;   // needs a diagram with a solitary node
    bool harnack_ok = true;         // h <= (d-1)(d-2)/2 - g - 1 there
    int a = -1;
};

MurasugiHarnackReport murasugi_harnack_checks(const ParamSpaceCurve& curve,
                                              const std::vector<Diagram>& diagrams,
                                              const ToleranceConfig& cfg);

/// One-parameter family of rational space curves: each homogeneous coefficient
/// is a polynomial in lambda (ascending coefficients).
struct FamilySpec {
    std::string label;
    int degree = 0;
    // entry_poly[row][j] = ascending lambda-coefficients of coeff j of row
    std::vector<std::vector<std::vector<double>>> entry_poly;
    double lo = 0.0, hi = 1.0;
    int orientation = +1;

    ParamSpaceCurve curve_at(double lambda) const;
};

struct WallEvent {
    double lambda_lo = 0.0, lambda_hi = 0.0;
    int d_wlambda = 0;
    HalfInt d_osc;
    enum Kind { First, Second, Third, Unknown } kind = Unknown;
};

/// Scans the family on a grid, brackets every jump of (w_lambda, osc) between
/// nearest valid samples, and bisects each bracket below width 1e-4.
std::vector<WallEvent> family_scan(const FamilySpec& family, const ToleranceConfig& cfg,
                                   int steps = 100);

/// Worker count honoring the RLINK_THREADS environment variable.
int worker_count();

}  // namespace rlink
