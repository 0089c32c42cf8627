#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "rlink/config.hpp"
#include "rlink/errors.hpp"

namespace rlink {

using cdouble = std::complex<double>;

/// Univariate polynomial with complex coefficients in ascending degree order.
/// Real polynomials are the common case and simply carry zero imaginary parts.
class Poly {
  public:
    Poly() = default;  // the zero polynomial
    explicit Poly(std::vector<cdouble> coeffs, double strip_tol = 0.0);
    static Poly from_real(const std::vector<double>& coeffs);
    static Poly constant(cdouble c);

    bool is_zero() const { return c_.empty(); }
    /// Degree of a nonzero polynomial; -1 encodes the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    const std::vector<cdouble>& coeffs() const { return c_; }
    cdouble coeff(int k) const {
        return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : cdouble(0.0);
    }
    cdouble leading() const { return c_.empty() ? cdouble(0.0) : c_.back(); }

    cdouble eval(cdouble x) const;  // Horner
    Poly derivative() const;
    Poly conjugate_coeffs() const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(cdouble k) const;

    double max_abs_coeff() const;
    bool is_real(double tol = 1e-12) const;

  private:
    std::vector<cdouble> c_;
};

/// Cluster of numerically coalescing roots.
struct RootCluster {
    cdouble center;
    int multiplicity = 1;
    double radius = 0.0;
};

/// All complex roots of p grouped into clusters; multiplicities sum to deg p.
/// Conjugate-symmetric input yields conjugate-symmetric clusters, and
/// near-real clusters of real polynomials are snapped onto the real axis.
std::vector<RootCluster> find_roots(const Poly& p, const ToleranceConfig& cfg);

/// Sylvester-matrix resultant.  Zero (relative to coefficient norms) iff the
/// inputs share a root.
cdouble resultant(const Poly& p, const Poly& q);

/// Real roots of a real-coefficient polynomial, with multiplicities, sorted
/// ascending.
std::vector<std::pair<double, int>> real_roots_with_multiplicity(
    const Poly& p, const ToleranceConfig& cfg);

}  // namespace rlink
