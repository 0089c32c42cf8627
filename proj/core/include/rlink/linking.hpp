#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rlink/config.hpp"
#include "rlink/curve.hpp"
#include "rlink/halfint.hpp"
#include "rlink/projection.hpp"

namespace rlink {

enum class LoopClosure { Loop, AntipodalArc };

/// Polyline loop on S^3 with continuous consecutive representatives.
struct LiftedLoop {
    std::vector<Eigen::Vector4d> samples;
    LoopClosure closure = LoopClosure::Loop;
    int orientation = +1;
};

struct FramingKind {
    enum Kind { Osculating, Blackboard } kind = Osculating;
    ProjectionCenter center;  // Blackboard only

    static FramingKind osculating() { return {Osculating, {}}; }
    static FramingKind blackboard(ProjectionCenter p) { return {Blackboard, std::move(p)}; }
};

/// Full preimage in S^3 of the real locus: one doubled loop (odd H_1 class)
/// or two antipodal loops.
std::vector<LiftedLoop> lift(const ParamSpaceCurve& curve, const ToleranceConfig& cfg);
std::vector<LiftedLoop> lift(const SampledLoop& loop, const ToleranceConfig& cfg);

/// Linking number in RP^3 as half the S^3 Gauss linking of full preimages.
/// Inputs must already be full preimages.  raw_out reports the unrounded
/// value (in RP^3 units) for convergence diagnostics.
HalfInt lk(const std::vector<LiftedLoop>& A, const std::vector<LiftedLoop>& B,
           const ToleranceConfig& cfg, double* raw_out = nullptr);

HalfInt lk(const ParamSpaceCurve& A, const ParamSpaceCurve& B, const ToleranceConfig& cfg,
           double* raw_out = nullptr);

/// Push-off of the real locus along the framing plane field, distance eps on
/// S^3.  One component: the full boundary of the framed band (two loops for
/// an annulus, one doubled loop for a Moebius band).
SampledLink push_off(const ParamSpaceCurve& curve, const FramingKind& framing, double eps,
                     const ToleranceConfig& cfg);

/// Self-linking number (1/2) lk(L, dF) with the band boundary from push_off,
/// verified stable under eps -> eps/2.  raw_out reports the unrounded value.
HalfInt self_linking(const ParamSpaceCurve& curve, const FramingKind& framing,
                     const ToleranceConfig& cfg, double* raw_out = nullptr);

/// Crossing-sign sum of a diagram (the combinatorial route to b_p).
HalfInt blackboard_from_diagram(const Diagram& diagram);

}  // namespace rlink
