#include "rlink/poly2.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace rlink {

cdouble Poly2::eval(cdouble u, cdouble v) const {
    cdouble acc = 0.0;
    for (int i = du_; i >= 0; --i) {
        cdouble row = 0.0;
        for (int j = dv_; j >= 0; --j) row = row * v + at(i, j);
        acc = acc * u + row;
    }
    return acc;
}

Poly Poly2::poly_in_v_at(cdouble u) const {
    std::vector<cdouble> cv(dv_ + 1, 0.0);
    for (int j = 0; j <= dv_; ++j) {
        cdouble acc = 0.0;
        for (int i = du_; i >= 0; --i) acc = acc * u + at(i, j);
        cv[j] = acc;
    }
    return Poly(std::move(cv), 0.0);
}

cdouble Poly2::eval_du(cdouble u, cdouble v) const {
    cdouble acc = 0.0;
    for (int i = 1; i <= du_; ++i) {
        cdouble row = 0.0;
        for (int j = dv_; j >= 0; --j) row = row * v + at(i, j);
        acc += row * static_cast<double>(i) * std::pow(u, i - 1);
    }
    return acc;
}

cdouble Poly2::eval_dv(cdouble u, cdouble v) const {
    cdouble acc = 0.0;
    for (int j = 1; j <= dv_; ++j) {
        cdouble col = 0.0;
        for (int i = du_; i >= 0; --i) col = col * u + at(i, j);
        acc += col * static_cast<double>(j) * std::pow(v, j - 1);
    }
    return acc;
}

Poly2& Poly2::axpy(double a, const Poly2& o) {
    if (o.du_ > du_ || o.dv_ > dv_) {
        Poly2 grown(std::max(du_, o.du_), std::max(dv_, o.dv_));
        for (int i = 0; i <= du_; ++i)
            for (int j = 0; j <= dv_; ++j) grown.at(i, j) = at(i, j);
        *this = grown;
    }
    for (int i = 0; i <= o.du_; ++i)
        for (int j = 0; j <= o.dv_; ++j) at(i, j) += a * o.at(i, j);
    return *this;
}

double Poly2::max_abs_coeff() const {
    double m = 0.0;
    for (double x : c_) m = std::max(m, std::abs(x));
    return m;
}

void Poly2::scale(double k) {
    for (double& x : c_) x *= k;
}

Poly2 symmetrized_bezoutian(const Poly& a, const Poly& b, int nominal_deg) {
    const int n = nominal_deg;
    // Antisymmetric numerator N_{rs} = a_r b_s - a_s b_r, then divide by
    // (t1 - t2) treating t1 as the outer variable: q_{r-1} = n_r + t2 * q_r.
    // The quotient coefficient matrix q(r, s) is symmetric.
    auto ar = [&](int k) { return a.coeff(k).real(); };
    auto br = [&](int k) { return b.coeff(k).real(); };

    std::vector<std::vector<double>> nmat(n + 1, std::vector<double>(n + 1, 0.0));
    for (int r = 0; r <= n; ++r)
        for (int s = 0; s <= n; ++s) nmat[r][s] = ar(r) * br(s) - ar(s) * br(r);

    std::vector<std::vector<double>> q(n, std::vector<double>(n + 1, 0.0));
    // q_{n-1}(t2) = n_n(t2); q_{r-1}(t2) = n_r(t2) + t2 * q_r(t2)
    for (int s = 0; s <= n; ++s) q[n - 1][s] = nmat[n][s];
    for (int r = n - 1; r >= 1; --r)
        for (int s = 0; s <= n; ++s) {
            double shifted = (s >= 1) ? q[r][s - 1] : 0.0;
            q[r - 1][s] = nmat[r][s] + shifted;
        }

    // Rewrite sum q(r,s) t1^r t2^s (symmetric, degrees <= n-1 in each) in
    // (u, v) using power sums P_k = t1^k + t2^k, P_k = u P_{k-1} - v P_{k-2}.
    std::vector<Poly2> P(n + 1);
    P[0] = Poly2(0, 0);
    P[0].at(0, 0) = 2.0;
    if (n >= 1) {
        P[1] = Poly2(1, 0);
        P[1].at(1, 0) = 1.0;
    }
    for (int k = 2; k <= n; ++k) {
        Poly2 pk(k, k / 2);
        for (int i = 0; i <= P[k - 1].deg_u(); ++i)
            for (int j = 0; j <= P[k - 1].deg_v(); ++j)
                pk.at(i + 1, j) += P[k - 1].at(i, j);  // u * P_{k-1}
        for (int i = 0; i <= P[k - 2].deg_u(); ++i)
            for (int j = 0; j <= P[k - 2].deg_v(); ++j)
                pk.at(i, j + 1) -= P[k - 2].at(i, j);  // -v * P_{k-2}
        P[k] = pk;
    }

    Poly2 out(std::max(n - 1, 0), std::max(n - 1, 0));
    for (int r = 0; r < n; ++r) {
        // diagonal: q(r,r) (t1 t2)^r = q(r,r) v^r
        out.at(0, r) += q[r][r];
        for (int s = 0; s < r; ++s) {
            double cc = q[r][s];  // == q[s][r]
            if (cc == 0.0) continue;
            // cc * v^s * P_{r-s}
            const Poly2& pk = P[r - s];
            for (int i = 0; i <= pk.deg_u(); ++i)
                for (int j = 0; j <= pk.deg_v(); ++j) out.at(i, j + s) += cc * pk.at(i, j);
        }
    }
    return out;
}

namespace {

// Roots of sum a_j T_j(x) via the colleague matrix, mapped back to u = hw * x.
std::vector<cdouble> colleague_roots(std::vector<double> a, double hw) {
    // strip numerically-dead leading coefficients
    double amax = 0.0;
    for (double x : a) amax = std::max(amax, std::abs(x));
    if (amax == 0.0) return {};
    int n = static_cast<int>(a.size()) - 1;
    while (n > 0 && std::abs(a[n]) < 1e-13 * amax) --n;
    a.resize(n + 1);
    if (n == 0) return {};

    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
    if (n == 1) {
        C(0, 0) = -a[0] / a[1];
    } else {
        C(0, 1) = 1.0;
        for (int i = 1; i < n - 1; ++i) {
            C(i, i - 1) = 0.5;
            C(i, i + 1) = 0.5;
        }
        C(n - 1, n - 2) = 0.5;
        for (int j = 0; j < n; ++j) C(n - 1, j) -= a[j] / (2.0 * a[n]);
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(C, /*computeEigenvectors=*/false);
    std::vector<cdouble> roots;
    roots.reserve(n);
    for (int i = 0; i < n; ++i) roots.push_back(es.eigenvalues()(i) * hw);
    return roots;
}

}  // namespace

EliminationResult eliminate_v(const Poly2& A, const Poly2& B, double hw) {
    const int m = A.deg_v(), n = B.deg_v();
    EliminationResult out;
    if (m == 0 && n == 0) {
        out.identically_zero = true;  // nothing to eliminate
        return out;
    }
    const int D = A.deg_u() * n + B.deg_u() * m;  // degree bound of the resultant in u
    const int N = D + 1;

    // Sylvester determinant sampled on Chebyshev nodes of [-hw, hw].
    std::vector<double> vals(N);
    double vmax = 0.0;
    for (int k = 0; k < N; ++k) {
        double x = std::cos(M_PI * (k + 0.5) / N);
        double u = hw * x;
        Poly pa = A.poly_in_v_at(u);
        Poly pb = B.poly_in_v_at(u);
        // fixed nominal degrees: pad to m and n regardless of local drops
        Eigen::MatrixXd S = Eigen::MatrixXd::Zero(m + n, m + n);
        auto ca = [&](int j) { return j <= pa.degree() ? pa.coeff(j).real() : 0.0; };
        auto cb = [&](int j) { return j <= pb.degree() ? pb.coeff(j).real() : 0.0; };
        for (int r = 0; r < n; ++r)
            for (int j = 0; j <= m; ++j) S(r, r + j) = ca(m - j);
        for (int r = 0; r < m; ++r)
            for (int j = 0; j <= n; ++j) S(n + r, r + j) = cb(n - j);
        vals[k] = Eigen::PartialPivLU<Eigen::MatrixXd>(S).determinant();
        if (!std::isfinite(vals[k])) {
            out.identically_zero = true;  // overflow; caller re-randomizes
            return out;
        }
        vmax = std::max(vmax, std::abs(vals[k]));
    }
    if (vmax == 0.0) {
        out.identically_zero = true;
        return out;
    }
    for (double& v : vals) v /= vmax;

    // Discrete cosine transform: exact Chebyshev coefficients for a degree-D
    // polynomial sampled on D+1 first-kind nodes.
    std::vector<double> cheb(N, 0.0);
    for (int j = 0; j < N; ++j) {
        double acc = 0.0;
        for (int k = 0; k < N; ++k) acc += vals[k] * std::cos(j * M_PI * (k + 0.5) / N);
        cheb[j] = acc * (j == 0 ? 1.0 : 2.0) / N;
    }

    double cmax = 0.0;
    for (double c : cheb) cmax = std::max(cmax, std::abs(c));
    if (cmax < 1e-12) {
        out.identically_zero = true;
        return out;
    }

    out.u_candidates = colleague_roots(std::move(cheb), hw);
    return out;
}

}  // namespace rlink
