#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rlink/config.hpp"
#include "rlink/poly.hpp"

namespace rlink {

/// Real Moebius transformation of RP^1 acting on homogeneous parameters:
/// old (s, t) = M * (sigma, tau).  Orientation-preserving iff det > 0.
struct Mobius {
    double m00 = 1.0, m01 = 0.0, m10 = 0.0, m11 = 1.0;

    static Mobius identity() { return {}; }
    static Mobius rotation(double phi);

    double det() const { return m00 * m11 - m01 * m10; }
    /// Old t-chart parameter of the point with new t-chart parameter tau.
    cdouble old_param(cdouble tau) const;
    /// Old homogeneous pair of the new pair (sigma, tau).
    std::pair<cdouble, cdouble> old_pair(cdouble sigma, cdouble tau) const;
};

/// Homogeneous binary form sum_j c_j s^(d-j) t^j of fixed degree d.
class BinaryForm {
  public:
    BinaryForm() : c_{0.0} {}
    explicit BinaryForm(std::vector<double> coeffs) : c_(std::move(coeffs)) {}

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    double coeff(int j) const { return c_[static_cast<size_t>(j)]; }
    const std::vector<double>& coeffs() const { return c_; }

    Poly chart_t() const;  // X(1, t), ascending in t
    Poly chart_s() const;  // X(s, 1), ascending in s

    BinaryForm d_s() const;
    BinaryForm d_t() const;

    double eval(double s, double t) const;
    cdouble eval(cdouble s, cdouble t) const;

    /// Substitute (s,t) = M * (sigma,tau) and expand.
    BinaryForm reparam(const Mobius& M) const;

    double max_abs() const;
    bool is_zero(double tol = 0.0) const;

  private:
    std::vector<double> c_;
};

/// Product of binary forms (degrees add).
BinaryForm operator*(const BinaryForm& a, const BinaryForm& b);
BinaryForm operator-(const BinaryForm& a, const BinaryForm& b);

/// Rational real curve given by homogeneous coordinate rows of equal degree.
struct RowCurve {
    std::vector<BinaryForm> rows;
    int degree = 0;

    RowCurve() = default;
    RowCurve(std::vector<BinaryForm> r, int d) : rows(std::move(r)), degree(d) {}

    RowCurve reparam(const Mobius& M) const;
    /// Point of R^n at homogeneous parameter (s, t) (not normalized).
    Eigen::VectorXd eval(double s, double t) const;
    Eigen::VectorXcd eval(cdouble s, cdouble t) const;
};

/// Degree-d rational real parametrization of a curve in RP^3.
struct ParamSpaceCurve {
    RowCurve coords;  // 4 rows
    int orientation = +1;
    std::string label;

    int degree() const { return coords.degree; }
    ParamSpaceCurve reparam(const Mobius& M) const {
        return {coords.reparam(M), orientation, label};
    }
    ParamSpaceCurve mirror() const;  // negate last coordinate row
};

/// Rational plane curve (3 homogeneous rows).
struct ParamPlaneCurve {
    RowCurve coords;
    std::string label;
    int degree() const { return coords.degree; }
};

/// Closed sampled loop in RP^3 carried by unit representatives in S^3.
struct SampledLoop {
    std::vector<Eigen::Vector4d> pts;  // consecutive continuous representatives
    bool antipodal_closure = false;    // last point approximately -first
    int orientation = +1;
};

/// Link given by sampled polyline components (genus >= 1 fallback input and
/// push-off output).
struct SampledLink {
    std::vector<SampledLoop> components;
    double min_gap = 0.0;  // smallest chordal distance between non-adjacent samples
};

// ---------------------------------------------------------------------------
// Parameter-pair eliminator (shared by validation, diagrams, dual curves)
// ---------------------------------------------------------------------------

enum class PairClass { RealPair, ConjugatePair, ComplexPair };

/// One unordered parameter pair {t1, t2}, t1 != t2, with [X(t1)] = [X(t2)].
struct PairSolution {
    cdouble t1, t2;              // t-chart values in the original parametrization
    bool t1_at_inf = false, t2_at_inf = false;
    cdouble u, v;                // t1 + t2, t1 * t2 (diagnostic; may be huge)
    PairClass cls = PairClass::RealPair;
    int multiplicity = 1;        // > 1 flags a non-transverse (non-generic) pair
};

/// Finds all parameter pairs where two distinct points of RP^1 map to the
/// same projective point, via symmetrized Bezoutians in (u, v) = (t1+t2,
/// t1*t2).  Works in a seeded randomized chart so pairs at infinity become
/// finite; retries with fresh randomization until `expected_total` solutions
/// are found (pass -1 to accept whatever verifies).
std::vector<PairSolution> parameter_pair_collisions(const RowCurve& curve,
                                                    const ToleranceConfig& cfg,
                                                    std::uint64_t salt,
                                                    int expected_total);

// ---------------------------------------------------------------------------
// Curve operations
// ---------------------------------------------------------------------------

/// Unit-normalized representative at t (or at infinity when omitted).
Eigen::Vector4d eval_chart(const ParamSpaceCurve& curve, std::optional<double> t);

struct TorsionInterval {
    double lo, hi;          // t-chart endpoints; the wrap-around interval has lo > hi
    bool through_inf = false;
    int sign = 0;           // sign of torsion on the open interval
};

/// Partition of the parameter circle by the real zeros of
/// det[X, X', X'', X'''] with the constant torsion sign on each piece.
std::vector<TorsionInterval> torsion_sign_profile(const ParamSpaceCurve& curve,
                                                  const ToleranceConfig& cfg);

struct ValidationReport {
    bool pass = false;
    bool structural_ok = false;
    std::vector<std::array<double, 2>> real_node_witnesses;   // (t1, t2), real branches
    std::vector<std::array<double, 2>> solitary_node_params;  // (Re tau, Im tau)
    std::vector<double> cusp_params;                          // non-immersed points
    int complex_node_count = 0;  // nodes away from RP^3 (diagnostic only)
    std::string message;
};

/// Checks that the real locus is an embedded smooth link: gcd-free rows,
/// spanning image, no real double points, immersion at real parameters.
ValidationReport validate_smooth_link(const ParamSpaceCurve& curve,
                                      const ToleranceConfig& cfg);

/// Number of real intersection points of the curve with a plane of RP^3.
int plane_section_count(const ParamSpaceCurve& curve, const Eigen::Vector4d& plane,
                        const ToleranceConfig& cfg, bool with_multiplicity = false);

/// Upper bound for the plane section number: minimum real section count over
/// a seeded ensemble of random planes and shifted tangent planes.
int min_plane_section_upper_bound(const ParamSpaceCurve& curve, const ToleranceConfig& cfg);

/// Real parameters where the curvature vanishes (osculating frame degenerates).
std::vector<double> curvature_vanishing_params(const ParamSpaceCurve& curve,
                                               const ToleranceConfig& cfg);

/// det[X, X', X'', X'''] in the t-chart (torsion sign polynomial).
Poly torsion_sign_polynomial(const ParamSpaceCurve& curve);

}  // namespace rlink
