#pragma once

#include <string>

#include "rlink/curve.hpp"
#include "rlink/invariants.hpp"

namespace rlink {

/// Parses a curve document: {"label": string, "degree": d, "coeffs": 4 arrays
/// of d+1 numbers or "p/q" rational strings, "orientation": 1 | -1}.
/// Throws InputError naming the first offending field.
ParamSpaceCurve curve_from_json_text(const std::string& text);
ParamSpaceCurve load_curve_file(const std::string& path);

/// Parses a family document: the curve schema with "coeffs" replaced by
/// "lambda_coeffs" (4 arrays of d+1 arrays of lambda-polynomial coefficients,
/// ascending) plus "range": [lo, hi].
FamilySpec family_from_json_text(const std::string& text);
FamilySpec load_family_file(const std::string& path);

/// Parses a JSON number or a "p/q" rational string.
double parse_rational(const std::string& text, const std::string& field);

}  // namespace rlink
