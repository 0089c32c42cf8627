#pragma once

#include <vector>

#include "rlink/poly.hpp"

namespace rlink {

/// Real bivariate polynomial sum_{i,j} c(i,j) u^i v^j, dense storage.
class Poly2 {
  public:
    Poly2() = default;
    Poly2(int deg_u, int deg_v) : du_(deg_u), dv_(deg_v), c_((deg_u + 1) * (deg_v + 1), 0.0) {}

    int deg_u() const { return du_; }
    int deg_v() const { return dv_; }
    double& at(int i, int j) { return c_[static_cast<size_t>(i) * (dv_ + 1) + j]; }
    double at(int i, int j) const { return c_[static_cast<size_t>(i) * (dv_ + 1) + j]; }

    cdouble eval(cdouble u, cdouble v) const;
    /// Coefficients in v after substituting a (complex) value for u.
    Poly poly_in_v_at(cdouble u) const;

    /// Gradient, for Newton polishing of 2x2 systems.
    cdouble eval_du(cdouble u, cdouble v) const;
    cdouble eval_dv(cdouble u, cdouble v) const;

    Poly2& axpy(double a, const Poly2& o);  // *this += a * o, shapes may differ
    double max_abs_coeff() const;
    void scale(double k);

  private:
    int du_ = 0, dv_ = 0;
    std::vector<double> c_{0.0};
};

/// Symmetrized Bezoutian: (a(t1) b(t2) - a(t2) b(t1)) / (t1 - t2) rewritten in
/// the symmetric variables u = t1 + t2, v = t1 t2.  `nominal_deg` pads both
/// inputs to a common degree so that different coordinate rows stay
/// compatible.
Poly2 symmetrized_bezoutian(const Poly& a, const Poly& b, int nominal_deg);

struct EliminationResult {
    bool identically_zero = false;
    std::vector<cdouble> u_candidates;
};

/// Eliminates v from the pair (A, B): interpolates the Sylvester determinant
/// of the two polynomials (viewed in v) on a Chebyshev grid in u and returns
/// all complex roots of that resultant via the colleague matrix.
EliminationResult eliminate_v(const Poly2& A, const Poly2& B, double interp_halfwidth = 3.0);

}  // namespace rlink
