#pragma once

#include <stdexcept>
#include <string>

namespace rlink {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroPolynomial : Error {
    ZeroPolynomial() : Error("operation undefined for the zero polynomial") {}
};

struct NoConvergence : Error {
    explicit NoConvergence(const std::string& what) : Error(what) {}
};

struct DegenerateCurve : Error {
    explicit DegenerateCurve(const std::string& what) : Error(what) {}
};

struct CurvatureVanishes : Error {
    explicit CurvatureVanishes(const std::string& what) : Error(what) {}
};

struct PlaneContainsCurve : Error {
    PlaneContainsCurve() : Error("plane pairing polynomial is identically zero") {}
};

struct CenterOnCurve : Error {
    CenterOnCurve() : Error("projection center lies on the curve") {}
};

struct DegreeDrop : Error {
    explicit DegreeDrop(const std::string& what) : Error(what) {}
};

struct NonGenericCenter : Error {
    explicit NonGenericCenter(const std::string& what) : Error(what) {}
};

struct DegenerateGaussMap : Error {
    DegenerateGaussMap() : Error("Gauss map vanishes identically (curve is a line)") {}
    explicit DegenerateGaussMap(const std::string& what) : Error(what) {}
};

struct SamplingTooCoarse : Error {
    explicit SamplingTooCoarse(const std::string& what) : Error(what) {}
};

struct CurvesIntersect : Error {
    CurvesIntersect() : Error("link parts are not disjoint in RP^3") {}
};

struct RoundingUnsafe : Error {
    explicit RoundingUnsafe(const std::string& what) : Error(what) {}
};

struct FramingDegenerate : Error {
    explicit FramingDegenerate(const std::string& what) : Error(what) {}
};

struct UnstableEps : Error {
    explicit UnstableEps(const std::string& what) : Error(what) {}
};

struct SignRuleUnverified : Error {
    explicit SignRuleUnverified(const std::string& what) : Error(what) {}
};

struct BoundViolated : Error {
    explicit BoundViolated(const std::string& what) : Error(what) {}
};

struct NoValidSamples : Error {
    NoValidSamples() : Error("family has no valid smooth samples") {}
    explicit NoValidSamples(const std::string& what) : Error(what) {}
};

/// Malformed input file or document; the message names the offending field.
struct InputError : Error {
    explicit InputError(const std::string& what) : Error(what) {}
};

}  // namespace rlink
