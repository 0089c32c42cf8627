#include "rlink/curve.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rlink/errors.hpp"
#include "rlink/poly2.hpp"

namespace rlink {

namespace {

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t salt, std::uint64_t extra = 0) {
    std::uint64_t s = seed;
    s ^= salt + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
    s ^= extra + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
    return std::mt19937_64(s);
}

// Determinant of a small matrix of polynomials by Laplace expansion.
Poly poly_det(const std::vector<std::vector<Poly>>& M) {
    const size_t n = M.size();
    if (n == 1) return M[0][0];
    Poly acc;
    for (size_t j = 0; j < n; ++j) {
        std::vector<std::vector<Poly>> minor;
        minor.reserve(n - 1);
        for (size_t r = 1; r < n; ++r) {
            std::vector<Poly> row;
            row.reserve(n - 1);
            for (size_t c = 0; c < n; ++c)
                if (c != j) row.push_back(M[r][c]);
            minor.push_back(std::move(row));
        }
        Poly term = M[0][j] * poly_det(minor);
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

}  // namespace

// ---------------------------------------------------------------------------
// Mobius / BinaryForm / RowCurve
// ---------------------------------------------------------------------------

Mobius Mobius::rotation(double phi) {
    Mobius M;
    M.m00 = std::cos(phi);
    M.m01 = -std::sin(phi);
    M.m10 = std::sin(phi);
    M.m11 = std::cos(phi);
    return M;
}

cdouble Mobius::old_param(cdouble tau) const {
    return (m10 + m11 * tau) / (m00 + m01 * tau);
}

std::pair<cdouble, cdouble> Mobius::old_pair(cdouble sigma, cdouble tau) const {
    return {m00 * sigma + m01 * tau, m10 * sigma + m11 * tau};
}

Poly BinaryForm::chart_t() const {
    std::vector<cdouble> c(c_.begin(), c_.end());
    return Poly(std::move(c));
}

Poly BinaryForm::chart_s() const {
    std::vector<cdouble> c(c_.rbegin(), c_.rend());
    return Poly(std::move(c));
}

BinaryForm BinaryForm::d_s() const {
    const int d = degree();
    if (d == 0) return BinaryForm(std::vector<double>{0.0});
    std::vector<double> out(static_cast<size_t>(d), 0.0);
    for (int j = 0; j < d; ++j) out[j] = (d - j) * c_[j];
    return BinaryForm(std::move(out));
}

BinaryForm BinaryForm::d_t() const {
    const int d = degree();
    if (d == 0) return BinaryForm(std::vector<double>{0.0});
    std::vector<double> out(static_cast<size_t>(d), 0.0);
    for (int j = 1; j <= d; ++j) out[j - 1] = j * c_[j];
    return BinaryForm(std::move(out));
}

double BinaryForm::eval(double s, double t) const {
    const int d = degree();
    double acc = 0.0, tp = 1.0;
    std::vector<double> spow(d + 1);
    spow[0] = 1.0;
    for (int k = 1; k <= d; ++k) spow[k] = spow[k - 1] * s;
    for (int j = 0; j <= d; ++j) {
        acc += c_[j] * spow[d - j] * tp;
        tp *= t;
    }
    return acc;
}

cdouble BinaryForm::eval(cdouble s, cdouble t) const {
    const int d = degree();
    cdouble acc = 0.0, tp = 1.0;
    std::vector<cdouble> spow(d + 1);
    spow[0] = 1.0;
    for (int k = 1; k <= d; ++k) spow[k] = spow[k - 1] * s;
    for (int j = 0; j <= d; ++j) {
        acc += c_[j] * spow[d - j] * tp;
        tp *= t;
    }
    return acc;
}

BinaryForm BinaryForm::reparam(const Mobius& M) const {
    const int d = degree();
    // (s,t) = (m00 sigma + m01 tau, m10 sigma + m11 tau); expand
    // sum_j c_j s^{d-j} t^j by convolving linear-form powers.
    // pow_s[k] = coefficients of (m00 sigma + m01 tau)^k in tau-ascending order.
    std::vector<std::vector<double>> pow_s(d + 1), pow_t(d + 1);
    pow_s[0] = {1.0};
    pow_t[0] = {1.0};
    for (int k = 1; k <= d; ++k) {
        pow_s[k].assign(k + 1, 0.0);
        pow_t[k].assign(k + 1, 0.0);
        for (int j = 0; j < k; ++j) {
            pow_s[k][j] += pow_s[k - 1][j] * M.m00;
            pow_s[k][j + 1] += pow_s[k - 1][j] * M.m01;
            pow_t[k][j] += pow_t[k - 1][j] * M.m10;
            pow_t[k][j + 1] += pow_t[k - 1][j] * M.m11;
        }
    }
    std::vector<double> out(d + 1, 0.0);
    for (int j = 0; j <= d; ++j) {
        if (c_[j] == 0.0) continue;
        const auto& a = pow_s[d - j];
        const auto& b = pow_t[j];
        for (size_t p = 0; p < a.size(); ++p)
            for (size_t q = 0; q < b.size(); ++q) out[p + q] += c_[j] * a[p] * b[q];
    }
    return BinaryForm(std::move(out));
}

double BinaryForm::max_abs() const {
    double m = 0.0;
    for (double x : c_) m = std::max(m, std::abs(x));
    return m;
}

bool BinaryForm::is_zero(double tol) const { return max_abs() <= tol; }

BinaryForm operator*(const BinaryForm& a, const BinaryForm& b) {
    std::vector<double> out(static_cast<size_t>(a.degree() + b.degree()) + 1, 0.0);
    for (int i = 0; i <= a.degree(); ++i)
        for (int j = 0; j <= b.degree(); ++j) out[static_cast<size_t>(i + j)] += a.coeff(i) * b.coeff(j);
    return BinaryForm(std::move(out));
}

BinaryForm operator-(const BinaryForm& a, const BinaryForm& b) {
    std::vector<double> out(static_cast<size_t>(std::max(a.degree(), b.degree())) + 1, 0.0);
    for (int i = 0; i <= a.degree(); ++i) out[static_cast<size_t>(i)] += a.coeff(i);
    for (int i = 0; i <= b.degree(); ++i) out[static_cast<size_t>(i)] -= b.coeff(i);
    return BinaryForm(std::move(out));
}

RowCurve RowCurve::reparam(const Mobius& M) const {
    std::vector<BinaryForm> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.reparam(M));
    return RowCurve(std::move(out), degree);
}

Eigen::VectorXd RowCurve::eval(double s, double t) const {
    Eigen::VectorXd v(static_cast<long>(rows.size()));
    for (size_t k = 0; k < rows.size(); ++k) v(static_cast<long>(k)) = rows[k].eval(s, t);
    return v;
}

Eigen::VectorXcd RowCurve::eval(cdouble s, cdouble t) const {
    Eigen::VectorXcd v(static_cast<long>(rows.size()));
    for (size_t k = 0; k < rows.size(); ++k) v(static_cast<long>(k)) = rows[k].eval(s, t);
    return v;
}

ParamSpaceCurve ParamSpaceCurve::mirror() const {
    ParamSpaceCurve m = *this;
    std::vector<double> c = m.coords.rows[3].coeffs();
    for (double& x : c) x = -x;
    m.coords.rows[3] = BinaryForm(std::move(c));
    m.label = label + "_mirror";
    return m;
}

// ---------------------------------------------------------------------------
// Parameter-pair eliminator
// ---------------------------------------------------------------------------

namespace {

// Relative wedge norm of two complex vectors: 0 iff parallel.
double wedge_residual(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    double num = 0.0;
    for (long i = 0; i < a.size(); ++i)
        for (long j = i + 1; j < a.size(); ++j)
            num += std::norm(a(i) * b(j) - a(j) * b(i));
    double den = a.squaredNorm() * b.squaredNorm();
    return den > 0.0 ? std::sqrt(num / den) : 1.0;
}

struct UvSolution {
    cdouble u, v;
    int multiplicity = 1;
};

}  // namespace

std::vector<PairSolution> parameter_pair_collisions(const RowCurve& curve,
                                                    const ToleranceConfig& cfg,
                                                    std::uint64_t salt, int expected_total) {
    const int n = curve.degree;
    const size_t k = curve.rows.size();
    std::string last_fail = "eliminator did not run";

    // Verified solutions accumulate across attempts: each random rotation and
    // random Bezoutian combination conditions a different region of the
    // solution set, so a single attempt may recover only a subset.
    std::vector<PairSolution> pool;
    auto pool_total = [&]() {
        int total = 0;
        for (const auto& s : pool) total += s.multiplicity;
        return total;
    };

    // The exact collision system in the original coordinates: every 2x2
    // minor of [X(t1); X(t2)] vanishes.  Each candidate recovered in a
    // rotated chart is refined on this system before it enters the pool, so
    // pooled solutions share one coordinate system and deduplicate reliably.
    std::vector<Poly> orig_polys, orig_dpolys;
    for (const auto& row : curve.rows) {
        Poly p = row.chart_t();
        double m = p.max_abs_coeff();
        if (m > 0) p = p * cdouble(1.0 / m);
        orig_polys.push_back(p);
        orig_dpolys.push_back(p.derivative());
    }
    // Refine (u, v) = (t1 + t2, t1 t2) in place by Gauss-Newton on the exact
    // system.  Returns false if there is no collision nearby; in particular a
    // candidate straddling a flex-type point (where the wedge is small but
    // nonzero) collapses onto the diagonal under refinement and is rejected.
    auto verify_original = [&](cdouble& u, cdouble& v) {
        cdouble sq = std::sqrt(u * u - 4.0 * v);
        cdouble t1 = 0.5 * (u + sq), t2 = 0.5 * (u - sq);
        const double scale0 = 1.0 + std::abs(t1) + std::abs(t2);
        const double sep0 = std::abs(t1 - t2);
        if (sep0 < 1e-5 * scale0) return false;
        const long kk = static_cast<long>(k);
        const long m = kk * (kk - 1) / 2;
        Eigen::VectorXcd x1(kk), x2(kk), d1(kk), d2(kk);
        auto fill = [&](cdouble t, Eigen::VectorXcd& x, Eigen::VectorXcd& dx) {
            for (long i = 0; i < kk; ++i) {
                x(i) = orig_polys[static_cast<size_t>(i)].eval(t);
                dx(i) = orig_dpolys[static_cast<size_t>(i)].eval(t);
            }
        };
        for (int it = 0; it < 40; ++it) {
            fill(t1, x1, d1);
            fill(t2, x2, d2);
            double nn = x1.norm() * x2.norm();
            if (nn < 1e-300) return false;
            Eigen::VectorXcd F(m);
            Eigen::MatrixXcd J(m, 2);
            long r = 0;
            for (long i = 0; i < kk; ++i)
                for (long j = i + 1; j < kk; ++j, ++r) {
                    F(r) = (x1(i) * x2(j) - x1(j) * x2(i)) / nn;
                    J(r, 0) = (d1(i) * x2(j) - d1(j) * x2(i)) / nn;
                    J(r, 1) = (x1(i) * d2(j) - x1(j) * d2(i)) / nn;
                }
            Eigen::Vector2cd step = J.colPivHouseholderQr().solve(-F);
            t1 += step(0);
            t2 += step(1);
            if (std::abs(t1 - t2) < std::max(1e-5 * scale0, 0.05 * sep0))
                return false;  // collapsing onto the diagonal: not a collision
            if (step.norm() < 1e-12 * scale0) break;
        }
        fill(t1, x1, d1);
        fill(t2, x2, d2);
        if (wedge_residual(x1, x2) > 1e-7) return false;
        u = t1 + t2;
        v = t1 * t2;
        return true;
    };

    // The chordal metric on the parameter sphere makes a huge finite
    // parameter and a flagged point at infinity compare equal.
    auto chordal = [](cdouble a, bool ainf, cdouble b, bool binf) {
        if (ainf && binf) return 0.0;
        if (ainf) return 1.0 / std::sqrt(1.0 + std::norm(b));
        if (binf) return 1.0 / std::sqrt(1.0 + std::norm(a));
        return std::abs(a - b) / std::sqrt((1.0 + std::norm(a)) * (1.0 + std::norm(b)));
    };
    auto merge_pool = [&](const PairSolution& ps) {
        auto same_pair = [&](const PairSolution& q) {
            const double thr = 1e-4;
            double d11 = chordal(q.t1, q.t1_at_inf, ps.t1, ps.t1_at_inf);
            double d22 = chordal(q.t2, q.t2_at_inf, ps.t2, ps.t2_at_inf);
            if (d11 < thr && d22 < thr) return true;
            double d12 = chordal(q.t1, q.t1_at_inf, ps.t2, ps.t2_at_inf);
            double d21 = chordal(q.t2, q.t2_at_inf, ps.t1, ps.t1_at_inf);
            return d12 < thr && d21 < thr;
        };
        for (auto& q : pool) {
            if (same_pair(q)) {
                // a genuinely multiple pair has a singular Jacobian for
                // every combination; a spurious flag is attempt-specific
                q.multiplicity = std::min(q.multiplicity, ps.multiplicity);
                return;
            }
        }
        pool.push_back(ps);
    };

    for (int attempt = 0; attempt < 40; ++attempt) {
        auto rng = make_rng(cfg.seed, salt, static_cast<std::uint64_t>(attempt) + 1);
        std::uniform_real_distribution<double> uangle(0.05, M_PI - 0.05);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const Mobius R = Mobius::rotation(uangle(rng));
        const RowCurve cur = curve.reparam(R);

        std::vector<Poly> rowpolys;
        for (const auto& row : cur.rows) {
            Poly p = row.chart_t();
            double m = p.max_abs_coeff();
            rowpolys.push_back(m > 0 ? p * cdouble(1.0 / m) : p);
        }

        std::vector<Poly2> bez;
        for (size_t i = 0; i < k; ++i)
            for (size_t j = i + 1; j < k; ++j) {
                if (rowpolys[i].is_zero() || rowpolys[j].is_zero()) continue;
                bez.push_back(symmetrized_bezoutian(rowpolys[i], rowpolys[j], n));
            }
        if (bez.size() < 2) throw Error("pair eliminator: too few independent coordinate rows");

        auto combo = [&](void) {
            Poly2 acc = bez[0];
            acc.scale(gauss(rng));
            for (size_t i = 1; i < bez.size(); ++i) acc.axpy(gauss(rng), bez[i]);
            double m = acc.max_abs_coeff();
            if (m > 0) acc.scale(1.0 / m);
            return acc;
        };
        const double snap = 10.0 * cfg.cluster_tol;
        std::vector<UvSolution> sols;
        bool degenerate_pair = false;
        Poly2 A = combo(), B = combo();

        auto consider = [&](cdouble u0, cdouble v0) {
            // Newton polish on the 2x2 system (A, B).
            cdouble u = u0, v = v0;
            for (int it = 0; it < 50; ++it) {
                cdouble fa = A.eval(u, v), fb = B.eval(u, v);
                cdouble au = A.eval_du(u, v), av = A.eval_dv(u, v);
                cdouble bu = B.eval_du(u, v), bv = B.eval_dv(u, v);
                cdouble det = au * bv - av * bu;
                if (std::abs(det) < 1e-300) break;
                cdouble du = (fa * bv - fb * av) / det;
                cdouble dv = (au * fb - bu * fa) / det;
                u -= du;
                v -= dv;
                if (std::abs(du) + std::abs(dv) < cfg.root_tol * (1.0 + std::abs(u) + std::abs(v)))
                    break;
            }
            // recover the parameter pair and verify the collision geometrically
            cdouble disc = std::sqrt(u * u - 4.0 * v);
            cdouble tau1 = 0.5 * (u + disc), tau2 = 0.5 * (u - disc);
            if (std::abs(tau1 - tau2) < snap * (1.0 + std::abs(tau1) + std::abs(tau2))) {
                // tangential self-touch straddling the diagonal: non-generic
                if (wedge_residual(cur.eval(1.0, tau1), cur.eval(1.0, tau2)) < 1e-5)
                    degenerate_pair = true;
                return;
            }
            Eigen::VectorXcd p1 = cur.eval(cdouble(1.0), tau1);
            Eigen::VectorXcd p2 = cur.eval(cdouble(1.0), tau2);
            if (p1.norm() < 1e-12 || p2.norm() < 1e-12) return;
            if (wedge_residual(p1, p2) > 1e-6) return;

            // snap to the real/conjugate classes
            if (std::abs(u.imag()) < snap * (1.0 + std::abs(u)) &&
                std::abs(v.imag()) < snap * (1.0 + std::abs(v))) {
                u = cdouble(u.real(), 0.0);
                v = cdouble(v.real(), 0.0);
            }
            // Jacobian degeneracy marks a multiple (non-transverse) pair
            cdouble au = A.eval_du(u, v), av = A.eval_dv(u, v);
            cdouble bu = B.eval_du(u, v), bv = B.eval_dv(u, v);
            double jnorm = std::abs(au) + std::abs(av) + std::abs(bu) + std::abs(bv);
            double jdet = std::abs(au * bv - av * bu);
            int mult = (jdet < 1e-8 * jnorm * jnorm + 1e-250) ? 2 : 1;

            for (auto& s : sols) {
                double thr = snap * (1.0 + std::abs(s.u) + std::abs(s.v));
                if (std::abs(s.u - u) + std::abs(s.v - v) < thr) return;  // duplicate
            }
            sols.push_back({u, v, mult});
        };

        // several independent random combinations per rotation: each
        // resultant recovers a different subset of the common zeros
        for (int c = 0; c < 3; ++c) {
            if (c > 0) {
                A = combo();
                B = combo();
            }
            // different interpolation windows condition different root scales
            static const double kHw[3] = {3.0, 1.0, 8.0};
            EliminationResult elim = eliminate_v(A, B, kHw[c]);
            if (elim.identically_zero) {
                last_fail = "resultant vanished identically";
                continue;
            }
            for (cdouble u0 : elim.u_candidates) {
                Poly pv = A.poly_in_v_at(u0);
                if (pv.degree() < 1) pv = B.poly_in_v_at(u0);
                if (pv.degree() < 1) continue;
                double m = pv.max_abs_coeff();
                if (m > 0) pv = pv * cdouble(1.0 / m);
                std::vector<RootCluster> vroots;
                try {
                    vroots = find_roots(pv, cfg);
                } catch (const Error&) {
                    continue;
                }
                for (const auto& cl : vroots) {
                    // loose pre-gate only: Newton polish plus the wedge
                    // verification inside consider() are the real filters
                    cdouble bval = B.eval(u0, cl.center);
                    if (std::abs(bval) < 1e-2) consider(u0, cl.center);
                }
            }
        }

        if (degenerate_pair) {
            // keep going: report the solutions, flag via multiplicity on the caller side
        }

        // Map back to the original parametrization and classify.
        for (const auto& s : sols) {
            PairSolution ps;
            bool real_uv = (s.u.imag() == 0.0 && s.v.imag() == 0.0);
            cdouble disc = s.u * s.u - 4.0 * s.v;
            cdouble sq = std::sqrt(disc);
            cdouble tau1 = 0.5 * (s.u + sq), tau2 = 0.5 * (s.u - sq);
            if (real_uv) {
                ps.cls = (disc.real() >= 0.0) ? PairClass::RealPair : PairClass::ConjugatePair;
                if (ps.cls == PairClass::ConjugatePair && tau1.imag() < 0.0) std::swap(tau1, tau2);
            } else {
                ps.cls = PairClass::ComplexPair;
            }
            auto map_back = [&](cdouble tau, cdouble& t_out, bool& at_inf) {
                cdouble den = R.m00 + R.m01 * tau;
                cdouble num = R.m10 + R.m11 * tau;
                if (std::abs(den) < 1e-11 * (1.0 + std::abs(num))) {
                    at_inf = true;
                    t_out = cdouble(0.0);
                } else {
                    at_inf = false;
                    t_out = num / den;
                }
            };
            map_back(tau1, ps.t1, ps.t1_at_inf);
            map_back(tau2, ps.t2, ps.t2_at_inf);
            if (!ps.t1_at_inf && !ps.t2_at_inf) {
                cdouble uu = ps.t1 + ps.t2, vv = ps.t1 * ps.t2;
                if (!verify_original(uu, vv)) continue;
                cdouble sq = std::sqrt(uu * uu - 4.0 * vv);
                ps.t1 = 0.5 * (uu + sq);
                ps.t2 = 0.5 * (uu - sq);
                if (ps.cls == PairClass::ConjugatePair && ps.t1.imag() < 0.0)
                    std::swap(ps.t1, ps.t2);
            }
            if (ps.cls == PairClass::RealPair) {
                ps.t1 = cdouble(ps.t1.real(), 0.0);
                ps.t2 = cdouble(ps.t2.real(), 0.0);
            }
            if (ps.cls == PairClass::ConjugatePair && !ps.t1_at_inf && !ps.t2_at_inf) {
                // enforce exact conjugacy of the reported pair
                cdouble tau = 0.5 * (ps.t1 + std::conj(ps.t2));
                ps.t1 = tau;
                ps.t2 = std::conj(tau);
            }
            ps.u = ps.t1 + ps.t2;
            ps.v = ps.t1 * ps.t2;
            ps.multiplicity = s.multiplicity;

            merge_pool(ps);
        }

        // completion phase: when the pool is still short, seed the exact
        // refiner from random starts; its residual gate only admits genuine
        // collisions, so this can only add solutions the charts missed
        if (pool_total() != expected_total) {
            std::cauchy_distribution<double> cauchy(0.0, 1.0);
            for (int s0 = 0; s0 < 200; ++s0) {
                cdouble r1(cauchy(rng), cauchy(rng)), r2(cauchy(rng), cauchy(rng));
                cdouble uu = r1 + r2, vv = r1 * r2;
                if (!verify_original(uu, vv)) continue;
                cdouble sq = std::sqrt(uu * uu - 4.0 * vv);
                cdouble t1 = 0.5 * (uu + sq), t2 = 0.5 * (uu - sq);
                if (std::abs(t1) > 1e8 || std::abs(t2) > 1e8) continue;  // leave to the charts
                PairSolution ps;
                bool real_uv = std::abs(uu.imag()) < snap * (1.0 + std::abs(uu)) &&
                               std::abs(vv.imag()) < snap * (1.0 + std::abs(vv));
                cdouble disc = uu * uu - 4.0 * vv;
                if (real_uv) {
                    ps.cls = (disc.real() >= 0.0) ? PairClass::RealPair : PairClass::ConjugatePair;
                } else {
                    ps.cls = PairClass::ComplexPair;
                }
                ps.t1 = t1;
                ps.t2 = t2;
                if (ps.cls == PairClass::RealPair) {
                    ps.t1 = cdouble(ps.t1.real(), 0.0);
                    ps.t2 = cdouble(ps.t2.real(), 0.0);
                } else if (ps.cls == PairClass::ConjugatePair) {
                    if (ps.t1.imag() < 0.0) std::swap(ps.t1, ps.t2);
                    cdouble tau = 0.5 * (ps.t1 + std::conj(ps.t2));
                    ps.t1 = tau;
                    ps.t2 = std::conj(tau);
                }
                ps.u = ps.t1 + ps.t2;
                ps.v = ps.t1 * ps.t2;
                merge_pool(ps);
            }
        }

        if (expected_total >= 0) {
            if (pool_total() == expected_total) return pool;
            last_fail = "found " + std::to_string(pool_total()) + " pairs, expected " +
                        std::to_string(expected_total);
        } else if (attempt >= 2) {
            // no closure count available: return the union after a few
            // independent attempts
            return pool;
        }
    }
    if (expected_total < 0) return pool;
    throw NoConvergence("pair eliminator failed after retries: " + last_fail);
}

// ---------------------------------------------------------------------------
// Curve operations
// ---------------------------------------------------------------------------

Eigen::Vector4d eval_chart(const ParamSpaceCurve& curve, std::optional<double> t) {
    Eigen::VectorXd v = t.has_value() ? curve.coords.eval(1.0, *t) : curve.coords.eval(0.0, 1.0);
    double scale = 0.0;
    for (const auto& row : curve.coords.rows) scale = std::max(scale, row.max_abs());
    double norm = v.norm();
    double grow = t.has_value() ? std::pow(1.0 + std::abs(*t), curve.degree()) : 1.0;
    if (norm < 1e-12 * scale * grow)
        throw DegenerateCurve("curve has a base point (all coordinates vanish)");
    Eigen::Vector4d out = v / norm;
    return out;
}

Poly torsion_sign_polynomial(const ParamSpaceCurve& curve) {
    std::vector<std::vector<Poly>> M(4, std::vector<Poly>(4));
    for (int kcol = 0; kcol < 4; ++kcol) {
        Poly p = curve.coords.rows[static_cast<size_t>(kcol)].chart_t();
        M[0][kcol] = p;
        for (int r = 1; r < 4; ++r) {
            p = p.derivative();
            M[r][kcol] = p;
        }
    }
    return poly_det(M);
}

std::vector<double> curvature_vanishing_params(const ParamSpaceCurve& curve,
                                               const ToleranceConfig& cfg) {
    // rank drop of [X, X', X''] at a real parameter; checked in a randomized
    // chart so that infinity is generic.
    auto rng = make_rng(cfg.seed, 0xC0417EULL);
    std::uniform_real_distribution<double> uangle(0.05, M_PI - 0.05);
    const Mobius R = Mobius::rotation(uangle(rng));
    const RowCurve cur = curve.coords.reparam(R);

    std::vector<Poly> rowp(4), rowp1(4), rowp2(4);
    double scale = 0.0;
    for (int kk = 0; kk < 4; ++kk) {
        rowp[kk] = cur.rows[static_cast<size_t>(kk)].chart_t();
        rowp1[kk] = rowp[kk].derivative();
        rowp2[kk] = rowp1[kk].derivative();
        scale = std::max(scale, rowp[kk].max_abs_coeff());
    }
    // four 3x3 minors of the 3x4 matrix [X; X'; X'']
    std::vector<Poly> minors;
    for (int drop = 0; drop < 4; ++drop) {
        std::vector<std::vector<Poly>> M(3, std::vector<Poly>(3));
        int c = 0;
        for (int col = 0; col < 4; ++col) {
            if (col == drop) continue;
            M[0][c] = rowp[col];
            M[1][c] = rowp1[col];
            M[2][c] = rowp2[col];
            ++c;
        }
        minors.push_back(poly_det(M));
    }
    size_t lead = 0;
    double best = -1.0;
    for (size_t i = 0; i < minors.size(); ++i)
        if (minors[i].max_abs_coeff() > best) { best = minors[i].max_abs_coeff(); lead = i; }
    std::vector<double> out;
    if (best <= 1e-14 * std::max(scale, 1.0)) {
        // [X; X'; X''] rank-deficient identically: planar or a line
        out.push_back(0.0);
        return out;
    }
    // Verify candidates directly: singular values of [X; X'; X''] evaluated in
    // the original parametrization (s-chart beyond |t| = 1, so points at or
    // near infinity are checked rather than conflated with chart artifacts).
    auto rank_drops = [&](double t0) {
        Eigen::Matrix<double, 3, 4> M;
        const bool use_s = std::abs(t0) > 1.0;
        const double a0 = use_s ? 1.0 / t0 : t0;
        for (int col = 0; col < 4; ++col) {
            const BinaryForm& row = curve.coords.rows[static_cast<size_t>(col)];
            Poly p = use_s ? row.chart_s() : row.chart_t();
            Poly p1 = p.derivative();
            Poly p2 = p1.derivative();
            M(0, col) = p.eval(a0).real();
            M(1, col) = p1.eval(a0).real();
            M(2, col) = p2.eval(a0).real();
        }
        for (int r = 0; r < 3; ++r) {
            double n = M.row(r).norm();
            if (n < 1e-300) return true;  // derivative vanishes outright
            M.row(r) /= n;
        }
        Eigen::JacobiSVD<Eigen::Matrix<double, 3, 4>> svd(M);
        return svd.singularValues()(2) < 1e-7 * svd.singularValues()(0);
    };
    for (const auto& [t0, mult] : real_roots_with_multiplicity(minors[lead], cfg)) {
        cdouble back = R.old_param(cdouble(t0));
        if (!std::isfinite(back.real())) continue;
        double cand = back.real();
        if (!rank_drops(cand)) continue;
        bool dup = false;
        for (double prev : out)
            if (std::abs(prev - cand) < 1e-6 * (1.0 + std::abs(prev))) dup = true;
        if (!dup) out.push_back(cand);
    }
    return out;
}

std::vector<TorsionInterval> torsion_sign_profile(const ParamSpaceCurve& curve,
                                                  const ToleranceConfig& cfg) {
    auto cusp = curvature_vanishing_params(curve, cfg);
    if (!cusp.empty())
        throw CurvatureVanishes("curvature vanishes near t = " + std::to_string(cusp.front()));

    Poly W = torsion_sign_polynomial(curve);
    if (W.is_zero() || W.max_abs_coeff() < 1e-14)
        throw CurvatureVanishes("torsion polynomial vanishes identically (planar curve)");

    std::vector<double> roots;
    if (W.degree() >= 1)
        for (const auto& [t0, mult] : real_roots_with_multiplicity(W, cfg)) roots.push_back(t0);
    std::sort(roots.begin(), roots.end());

    auto sgn = [&](double t) {
        double v = W.eval(cdouble(t)).real();
        return (v > 0) - (v < 0);
    };

    std::vector<TorsionInterval> out;
    const double INF = std::numeric_limits<double>::infinity();
    if (roots.empty()) {
        out.push_back({-INF, INF, true, sgn(0.0)});
        return out;
    }
    for (size_t i = 0; i + 1 < roots.size(); ++i) {
        double mid = 0.5 * (roots[i] + roots[i + 1]);
        out.push_back({roots[i], roots[i + 1], false, sgn(mid)});
    }
    // wrap interval through infinity
    double big = 10.0 * (1.0 + std::abs(roots.front()) + std::abs(roots.back()));
    int s_right = sgn(roots.back() + big), s_left = sgn(roots.front() - big);
    if (s_right == s_left) {
        out.push_back({roots.back(), roots.front(), true, s_right});
    } else {
        out.push_back({roots.back(), INF, false, s_right});
        out.push_back({-INF, roots.front(), false, s_left});
    }
    return out;
}

ValidationReport validate_smooth_link(const ParamSpaceCurve& curve, const ToleranceConfig& cfg) {
    ValidationReport rep;
    const int d = curve.degree();

    // structural: gcd-free rows (no base points), spanning image for d >= 3
    double scale = 0.0;
    for (const auto& row : curve.coords.rows) scale = std::max(scale, row.max_abs());
    if (scale == 0.0) {
        rep.message = "all coordinate rows vanish";
        return rep;
    }
    rep.structural_ok = true;

    // base point at infinity: all leading coefficients vanish
    bool inf_base = true;
    for (const auto& row : curve.coords.rows)
        if (std::abs(row.coeff(d)) > 1e-12 * scale) inf_base = false;
    if (inf_base) {
        rep.structural_ok = false;
        rep.message = "rows share the root at t=infinity (base point)";
        return rep;
    }
    // finite base points: common roots of all four rows
    {
        int lead = 0;
        double best = -1;
        for (int kk = 0; kk < 4; ++kk)
            if (curve.coords.rows[static_cast<size_t>(kk)].max_abs() > best) {
                best = curve.coords.rows[static_cast<size_t>(kk)].max_abs();
                lead = kk;
            }
        Poly p0 = curve.coords.rows[static_cast<size_t>(lead)].chart_t();
        if (p0.degree() >= 1) {
            for (const auto& cl : find_roots(p0, cfg)) {
                Eigen::VectorXcd v = curve.coords.eval(cdouble(1.0), cl.center);
                double grow = std::pow(1.0 + std::abs(cl.center), d);
                if (v.norm() < 1e-8 * scale * grow) {
                    rep.structural_ok = false;
                    rep.message = "rows share a common root (base point)";
                    return rep;
                }
            }
        }
    }
    if (d >= 3) {
        Eigen::MatrixXd C(4, d + 1);
        for (int kk = 0; kk < 4; ++kk)
            for (int j = 0; j <= d; ++j) C(kk, j) = curve.coords.rows[static_cast<size_t>(kk)].coeff(j);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(C);
        if (svd.singularValues()(3) < 1e-10 * svd.singularValues()(0)) {
            rep.structural_ok = false;
            rep.message = "coefficient matrix has rank < 4 (planar or degenerate image)";
            return rep;
        }
    }

    // real double points of the complex curve (either branch type)
    try {
        auto pairs = parameter_pair_collisions(curve.coords, cfg, 0x5A11DULL, -1);
        for (const auto& ps : pairs) {
            switch (ps.cls) {
                case PairClass::RealPair:
                    rep.real_node_witnesses.push_back({ps.t1.real(), ps.t2.real()});
                    break;
                case PairClass::ConjugatePair:
                    rep.solitary_node_params.push_back({ps.t1.real(), ps.t1.imag()});
                    break;
                case PairClass::ComplexPair:
                    rep.complex_node_count += 1;
                    break;
            }
        }
    } catch (const NoConvergence& e) {
        rep.message = std::string("node elimination failed: ") + e.what();
        rep.pass = false;
        return rep;
    }

    // immersion at real parameters: X' parallel to X
    {
        auto rng = make_rng(cfg.seed, 0x1712ULL);
        std::uniform_real_distribution<double> uangle(0.05, M_PI - 0.05);
        const Mobius R = Mobius::rotation(uangle(rng));
        const RowCurve cur = curve.coords.reparam(R);
        std::vector<Poly> rowp(4), rowp1(4);
        for (int kk = 0; kk < 4; ++kk) {
            rowp[kk] = cur.rows[static_cast<size_t>(kk)].chart_t();
            rowp1[kk] = rowp[kk].derivative();
        }
        std::vector<Poly> minors;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) minors.push_back(rowp[i] * rowp1[j] - rowp[j] * rowp1[i]);
        size_t lead = 0;
        double best = -1;
        for (size_t i = 0; i < minors.size(); ++i)
            if (minors[i].max_abs_coeff() > best) { best = minors[i].max_abs_coeff(); lead = i; }
        if (best > 0 && minors[lead].degree() >= 1) {
            for (const auto& [t0, mult] : real_roots_with_multiplicity(minors[lead], cfg)) {
                bool all_zero = true;
                for (size_t i = 0; i < minors.size(); ++i) {
                    if (i == lead) continue;
                    double grow = std::pow(1.0 + std::abs(t0),
                                           minors[i].degree() > 0 ? minors[i].degree() : 0);
                    if (std::abs(minors[i].eval(t0)) >
                        1e-7 * std::max(minors[i].max_abs_coeff(), 1e-30) * grow)
                        all_zero = false;
                }
                if (all_zero) rep.cusp_params.push_back(R.old_param(cdouble(t0)).real());
            }
        }
    }

    rep.pass = rep.structural_ok && rep.real_node_witnesses.empty() &&
               rep.solitary_node_params.empty() && rep.cusp_params.empty();
    if (rep.pass)
        rep.message = "smooth embedded real locus";
    else if (!rep.real_node_witnesses.empty())
        rep.message = "real double point with real branches";
    else if (!rep.solitary_node_params.empty())
        rep.message = "real double point with conjugate branches (solitary point of the curve)";
    else if (!rep.cusp_params.empty())
        rep.message = "parametrization fails to be an immersion at a real parameter";
    return rep;
}

int plane_section_count(const ParamSpaceCurve& curve, const Eigen::Vector4d& plane,
                        const ToleranceConfig& cfg, bool with_multiplicity) {
    const int d = curve.degree();
    if (plane.norm() == 0.0) throw Error("plane_section_count: zero plane vector");
    std::vector<double> g(d + 1, 0.0);
    double scale = 0.0;
    for (int kk = 0; kk < 4; ++kk) {
        for (int j = 0; j <= d; ++j) g[j] += plane(kk) * curve.coords.rows[static_cast<size_t>(kk)].coeff(j);
        scale = std::max(scale, curve.coords.rows[static_cast<size_t>(kk)].max_abs());
    }
    double gmax = 0.0;
    for (double x : g) gmax = std::max(gmax, std::abs(x));
    if (gmax < 1e-13 * scale * plane.norm()) throw PlaneContainsCurve();

    // strip numerically-dead leading coefficients => multiplicity at infinity
    int deg = d;
    while (deg > 0 && std::abs(g[deg]) < 1e-11 * gmax) --deg;
    int inf_mult = d - deg;

    std::vector<cdouble> cg(g.begin(), g.begin() + deg + 1);
    Poly gp{std::move(cg)};
    int count = 0;
    if (gp.degree() >= 1) {
        for (const auto& [t0, mult] : real_roots_with_multiplicity(gp, cfg))
            count += with_multiplicity ? mult : 1;
    }
    if (inf_mult > 0) count += with_multiplicity ? inf_mult : 1;
    return count;
}

int min_plane_section_upper_bound(const ParamSpaceCurve& curve, const ToleranceConfig& cfg) {
    auto rng = make_rng(cfg.seed, 0xB50ULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    int best = curve.degree();

    auto consider = [&](const Eigen::Vector4d& h) {
        if (h.norm() < 1e-12) return;
        try {
            best = std::min(best, plane_section_count(curve, h.normalized(), cfg, false));
        } catch (const PlaneContainsCurve&) {
        } catch (const Error&) {
        }
    };

    for (int i = 0; i < 64; ++i) {
        Eigen::Vector4d h;
        for (int kk = 0; kk < 4; ++kk) h(kk) = gauss(rng);
        consider(h);
    }

    // shifted tangent planes: the tangency pair of intersections is pushed
    // off the real axis for one of the two shift directions
    const int NS = 48;
    for (int i = 0; i < NS; ++i) {
        double theta = M_PI * (i + 0.5) / NS;
        double s = std::cos(theta), t = std::sin(theta);
        Eigen::Vector4d X = curve.coords.eval(s, t);
        Eigen::Vector4d X1(4);
        for (int kk = 0; kk < 4; ++kk) {
            const auto& row = curve.coords.rows[static_cast<size_t>(kk)];
            X1(kk) = -t * row.d_s().eval(s, t) + s * row.d_t().eval(s, t);
        }
        if (X.norm() < 1e-12 || X1.norm() < 1e-10) continue;
        // orthonormal basis of the tangent-plane pencil {h : <h,X>=<h,X'>=0}
        Eigen::Matrix<double, 4, 2> T;
        T.col(0) = X.normalized();
        Eigen::Vector4d w = X1 - X1.dot(T.col(0)) * T.col(0);
        if (w.norm() < 1e-10) continue;
        T.col(1) = w.normalized();
        Eigen::Matrix4d Pperp = Eigen::Matrix4d::Identity() - T * T.transpose();
        Eigen::JacobiSVD<Eigen::Matrix4d> svd(Pperp, Eigen::ComputeFullU);
        Eigen::Vector4d h1 = svd.matrixU().col(0), h2 = svd.matrixU().col(1);
        for (double alpha : {0.0, M_PI / 4, M_PI / 2, 3 * M_PI / 4}) {
            Eigen::Vector4d h = std::cos(alpha) * h1 + std::sin(alpha) * h2;
            for (double sign : {1.0, -1.0}) {
                consider(h + sign * cfg.geom_tol * X.normalized());
            }
        }
    }
    return best;
}

}  // namespace rlink
