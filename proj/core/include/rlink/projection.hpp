#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "rlink/config.hpp"
#include "rlink/curve.hpp"

namespace rlink {

/// Center of a linear projection RP^3 \ {p} -> RP^2.
struct ProjectionCenter {
    Eigen::Vector4d point;  // unit, first nonzero coordinate positive

    static ProjectionCenter normalized(Eigen::Vector4d p);
};

/// Hyperbolic node of the image curve: two real strands crossing.
struct Crossing {
    double t_over = 0.0, t_under = 0.0;
    int sign = 0;  // +-1, knot-diagram sign in the chart fixed per diagram
    Eigen::Vector3d image = Eigen::Vector3d::Zero();  // unit representative in RP^2
};

/// Solitary node: real image point, conjugate parameter branches.
struct SolitaryPoint {
    cdouble tau;  // Im(tau) > 0
    int sign = 0; // +-1 once assigned, 0 while unassigned
    Eigen::Vector3d image = Eigen::Vector3d::Zero();
};

struct FlexPoint {
    double t = 0.0;
    int multiplicity = 1;  // omega - 1
};

struct NodeCensus {
    int h = 0, e = 0, i = 0;
    int total() const { return h + e + i; }
};

struct Diagram {
    ProjectionCenter center;
    ParamPlaneCurve plane_curve;
    std::vector<Crossing> crossings;
    std::vector<SolitaryPoint> solitary;
    std::vector<FlexPoint> flexes;
    NodeCensus census;
    int bitangent_count = 0;  // B, counted with multiplicities
    int degree = 0;

    int flex_total() const {
        int f = 0;
        for (const auto& fp : flexes) f += fp.multiplicity;
        return f;
    }
};

/// Linear projection of the space curve from p; the three image rows are an
/// orthonormal completion of p.  Throws CenterOnCurve / DegreeDrop.
ParamPlaneCurve project(const ParamSpaceCurve& curve, const ProjectionCenter& p,
                        const ToleranceConfig& cfg);

/// Full diagram of the projection from p: signed crossings, solitary points,
/// imaginary-node count, flexes, solitary-bitangent count.  Throws
/// NonGenericCenter when p fails to give a nodal image with simple flexes.
Diagram build_diagram(const ParamSpaceCurve& curve, const ProjectionCenter& p,
                      const ToleranceConfig& cfg);

/// Solitary real bitangents of a plane curve: real lines tangent at a pair of
/// conjugate non-real points.  Returns upper-half-plane tangency parameters
/// with their orders omega; B = 2 * sum(omega).  Throws DegenerateGaussMap.
std::vector<std::pair<cdouble, int>> solitary_bitangents(const ParamPlaneCurve& curve,
                                                         const ToleranceConfig& cfg);

struct KleinReport {
    int F = 0, B = 0, h = 0, i = 0, d = 0;
    int lhs = 0, rhs = 0;  // F + B vs d(d-2) - 2h - 2i
    bool pass = false;
};

KleinReport klein_check(const Diagram& diagram);

/// Seeded rejection sampling of a center off the curve; the k-th draw of the
/// stream identified by salt.  Genericity beyond "not on the curve" is only
/// established by build_diagram.
ProjectionCenter random_center(const ParamSpaceCurve& curve, const ToleranceConfig& cfg,
                               std::uint64_t salt, int k);

/// Dual (Gauss-map) parametrization of a plane curve: row cross product of
/// C and C_t with the forced s factor removed; degree 2d-2.
RowCurve gauss_map_rows(const ParamPlaneCurve& curve);

}  // namespace rlink
