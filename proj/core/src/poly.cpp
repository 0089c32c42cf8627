#include "rlink/poly.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace rlink {

Poly::Poly(std::vector<cdouble> coeffs, double strip_tol) : c_(std::move(coeffs)) {
    while (!c_.empty() && std::abs(c_.back()) <= strip_tol) c_.pop_back();
}

Poly Poly::from_real(const std::vector<double>& coeffs) {
    std::vector<cdouble> c(coeffs.begin(), coeffs.end());
    return Poly(std::move(c));
}

Poly Poly::constant(cdouble c) { return Poly(std::vector<cdouble>{c}); }

cdouble Poly::eval(cdouble x) const {
    cdouble acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<cdouble> d(c_.size() - 1);
    for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
    return Poly(std::move(d));
}

Poly Poly::conjugate_coeffs() const {
    std::vector<cdouble> d(c_.size());
    for (size_t k = 0; k < c_.size(); ++k) d[k] = std::conj(c_[k]);
    return Poly(std::move(d));
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<cdouble> d(std::max(c_.size(), o.c_.size()), 0.0);
    for (size_t k = 0; k < c_.size(); ++k) d[k] += c_[k];
    for (size_t k = 0; k < o.c_.size(); ++k) d[k] += o.c_[k];
    return Poly(std::move(d), 0.0);
}

Poly Poly::operator-(const Poly& o) const { return *this + o * cdouble(-1.0); }

Poly Poly::operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly();
    std::vector<cdouble> d(c_.size() + o.c_.size() - 1, 0.0);
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) d[i + j] += c_[i] * o.c_[j];
    return Poly(std::move(d), 0.0);
}

Poly Poly::operator*(cdouble k) const {
    std::vector<cdouble> d(c_);
    for (auto& x : d) x *= k;
    return Poly(std::move(d), 0.0);
}

double Poly::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& x : c_) m = std::max(m, std::abs(x));
    return m;
}

bool Poly::is_real(double tol) const {
    double scale = std::max(max_abs_coeff(), 1.0);
    for (const auto& x : c_)
        if (std::abs(x.imag()) > tol * scale) return false;
    return true;
}

namespace {

// Eigenvalues of the balanced companion matrix.
std::vector<cdouble> companion_roots(const Poly& p) {
    const int n = p.degree();
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
    const cdouble lead = p.leading();
    for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) C(i, n - 1) = -p.coeff(i) / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw NoConvergence("companion eigenvalue iteration failed");
    std::vector<cdouble> roots(n);
    for (int i = 0; i < n; ++i) roots[i] = es.eigenvalues()(i);
    return roots;
}

// Multiplicity-aware Newton polish (Lagouanelle's multiplicity estimate).
// Multiple roots coalesce to full precision instead of smearing into a
// cluster of radius eps^(1/m).
void polish_roots(const Poly& p, std::vector<cdouble>& roots, double root_tol) {
    const Poly dp = p.derivative();
    const Poly ddp = dp.derivative();
    const int n = p.degree();
    for (auto& z : roots) {
        for (int it = 0; it < 60; ++it) {
            cdouble f = p.eval(z);
            cdouble f1 = dp.eval(z);
            if (std::abs(f1) == 0.0) break;
            cdouble q = f * ddp.eval(z) / (f1 * f1);
            double m_est = std::real(1.0 / (1.0 - q));
            int m = static_cast<int>(std::lround(m_est));
            m = std::clamp(m, 1, n);
            cdouble step = static_cast<double>(m) * f / f1;
            z -= step;
            if (std::abs(step) < root_tol * (1.0 + std::abs(z))) break;
        }
    }
}

struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<RootCluster> find_roots(const Poly& p, const ToleranceConfig& cfg) {
    if (p.is_zero()) throw ZeroPolynomial();
    if (p.degree() < 1) return {};
    cfg.validate();

    // Drop leading coefficients that are negligible relative to the largest
    // one: they are numerical residue of cancellations, and feeding them to
    // the companion matrix manufactures huge spurious eigenvalues.
    Poly q = p;
    {
        const double floor_ = 1e-12 * p.max_abs_coeff();
        std::vector<cdouble> cs;
        cs.reserve(static_cast<size_t>(p.degree()) + 1);
        for (int k = 0; k <= p.degree(); ++k) cs.push_back(p.coeff(k));
        while (cs.size() > 1 && std::abs(cs.back()) < floor_) cs.pop_back();
        q = Poly(std::move(cs));
    }
    if (q.degree() < 1) return {};

    std::vector<cdouble> roots = companion_roots(q);
    polish_roots(q, roots, cfg.root_tol);

    const int n = static_cast<int>(roots.size());
    DisjointSet ds(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double thr = cfg.cluster_tol * (1.0 + std::max(std::abs(roots[i]), std::abs(roots[j])));
            if (std::abs(roots[i] - roots[j]) < thr) ds.unite(i, j);
        }

    std::vector<RootCluster> clusters;
    std::vector<int> rep_index(n, -1);
    for (int i = 0; i < n; ++i) {
        int r = ds.find(i);
        if (rep_index[r] < 0) {
            rep_index[r] = static_cast<int>(clusters.size());
            clusters.push_back({cdouble(0.0), 0, 0.0});
        }
        RootCluster& cl = clusters[rep_index[r]];
        cl.center += roots[i];
        cl.multiplicity += 1;
    }
    for (auto& cl : clusters) cl.center /= static_cast<double>(cl.multiplicity);
    for (int i = 0; i < n; ++i) {
        RootCluster& cl = clusters[rep_index[ds.find(i)]];
        cl.radius = std::max(cl.radius, std::abs(roots[i] - cl.center));
    }
    for (auto& cl : clusters)
        cl.radius += 10.0 * cfg.root_tol * (1.0 + std::abs(cl.center));

    if (p.is_real()) {
        // Snap near-real clusters, then pair the rest into exact conjugates.
        for (auto& cl : clusters) {
            if (std::abs(cl.center.imag()) < cfg.cluster_tol * (1.0 + std::abs(cl.center)))
                cl.center = cdouble(cl.center.real(), 0.0);
        }
        std::vector<bool> used(clusters.size(), false);
        for (size_t i = 0; i < clusters.size(); ++i) {
            if (used[i] || clusters[i].center.imag() <= 0.0) continue;
            int best = -1;
            double best_d = 1e300;
            for (size_t j = 0; j < clusters.size(); ++j) {
                if (j == i || used[j] || clusters[j].center.imag() >= 0.0) continue;
                if (clusters[j].multiplicity != clusters[i].multiplicity) continue;
                double dd = std::abs(clusters[j].center - std::conj(clusters[i].center));
                if (dd < best_d) { best_d = dd; best = static_cast<int>(j); }
            }
            if (best >= 0) {
                cdouble c = 0.5 * (clusters[i].center + std::conj(clusters[best].center));
                clusters[i].center = c;
                clusters[best].center = std::conj(c);
                used[i] = used[best] = true;
            }
        }
    }

    // Enforce pairwise separation: merge clusters whose certified disks touch.
    bool merged = true;
    while (merged && clusters.size() > 1) {
        merged = false;
        for (size_t i = 0; i < clusters.size() && !merged; ++i)
            for (size_t j = i + 1; j < clusters.size() && !merged; ++j) {
                if (std::abs(clusters[i].center - clusters[j].center) <=
                    clusters[i].radius + clusters[j].radius) {
                    int mi = clusters[i].multiplicity, mj = clusters[j].multiplicity;
                    cdouble c = (clusters[i].center * static_cast<double>(mi) +
                                 clusters[j].center * static_cast<double>(mj)) /
                                static_cast<double>(mi + mj);
                    double r = std::max(std::abs(clusters[i].center - c) + clusters[i].radius,
                                        std::abs(clusters[j].center - c) + clusters[j].radius);
                    clusters[i] = {c, mi + mj, r};
                    clusters.erase(clusters.begin() + static_cast<long>(j));
                    merged = true;
                }
            }
    }

    // Residual sanity at cluster centers.
    double scale = q.max_abs_coeff();
    for (const auto& cl : clusters) {
        double grow = std::pow(1.0 + std::abs(cl.center), q.degree());
        if (std::abs(q.eval(cl.center)) > 1e-4 * scale * grow)
            throw NoConvergence("root polish left a large residual at cluster center");
    }

    std::sort(clusters.begin(), clusters.end(), [](const RootCluster& a, const RootCluster& b) {
        if (a.center.real() != b.center.real()) return a.center.real() < b.center.real();
        return a.center.imag() < b.center.imag();
    });
    return clusters;
}

cdouble resultant(const Poly& p, const Poly& q) {
    if (p.is_zero() || q.is_zero()) throw ZeroPolynomial();
    const int m = p.degree(), n = q.degree();
    if (m == 0) return std::pow(p.coeff(0), n);
    if (n == 0) return std::pow(q.coeff(0), m);
    Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(m + n, m + n);
    for (int r = 0; r < n; ++r)
        for (int k = 0; k <= m; ++k) S(r, r + k) = p.coeff(m - k);
    for (int r = 0; r < m; ++r)
        for (int k = 0; k <= n; ++k) S(n + r, r + k) = q.coeff(n - k);
    return Eigen::PartialPivLU<Eigen::MatrixXcd>(S).determinant();
}

std::vector<std::pair<double, int>> real_roots_with_multiplicity(const Poly& p,
                                                                 const ToleranceConfig& cfg) {
    if (p.is_zero()) throw ZeroPolynomial();
    if (!p.is_real(cfg.root_tol))
        throw Error("real_roots_with_multiplicity: polynomial has non-real coefficients");
    std::vector<std::pair<double, int>> out;
    if (p.degree() < 1) return out;
    for (const auto& cl : find_roots(p, cfg))
        if (cl.center.imag() == 0.0) out.emplace_back(cl.center.real(), cl.multiplicity);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace rlink
