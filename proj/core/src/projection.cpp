#include "rlink/projection.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rlink/errors.hpp"

namespace rlink {

namespace {

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t salt, std::uint64_t extra = 0) {
    std::uint64_t s = seed;
    s ^= salt + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
    s ^= extra + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
    return std::mt19937_64(s);
}

Poly poly_det3(const std::array<std::array<Poly, 3>, 3>& M) {
    Poly acc;
    acc = M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
          M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
          M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
    return acc;
}

/// Real direction of a complex vector known to be proportional to one.
/// Returns a unit real vector; relative deviation reported via *resid.
Eigen::Vector3d realify(const Eigen::Vector3cd& v, double* resid = nullptr) {
    // phase-align: rotate by the conjugate phase of the largest component,
    // then the imaginary part should be negligible
    int k = 0;
    double best = 0.0;
    for (int i = 0; i < 3; ++i)
        if (std::abs(v(i)) > best) { best = std::abs(v(i)); k = i; }
    cdouble phase = std::conj(v(k)) / std::abs(v(k));
    Eigen::Vector3cd w = v * phase;
    Eigen::Vector3d re = w.real(), im = w.imag();
    if (resid) *resid = im.norm() / (re.norm() + 1e-300);
    return re.normalized();
}

Eigen::Vector3d sign_normalized3(Eigen::Vector3d v) {
    for (int i = 0; i < 3; ++i) {
        if (v(i) != 0.0) {
            if (v(i) < 0.0) v = -v;
            break;
        }
    }
    return v;
}

// Minimal sine of the angle between C(t) and p over a dense parameter sweep.
double min_angle_to_curve(const ParamSpaceCurve& curve, const Eigen::Vector4d& p) {
    double worst = 1.0;
    const int N = 720;
    for (int i = 0; i < N; ++i) {
        double theta = M_PI * i / N;
        Eigen::Vector4d x = curve.coords.eval(std::cos(theta), std::sin(theta));
        double nx = x.norm();
        if (nx < 1e-300) continue;
        x /= nx;
        double c = std::abs(x.dot(p));
        worst = std::min(worst, std::sqrt(std::max(0.0, 1.0 - c * c)));
    }
    return worst;
}

}  // namespace

ProjectionCenter ProjectionCenter::normalized(Eigen::Vector4d p) {
    double n = p.norm();
    if (n == 0.0) throw Error("projection center: zero vector");
    p /= n;
    for (int i = 0; i < 4; ++i) {
        if (p(i) != 0.0) {
            if (p(i) < 0.0) p = -p;
            break;
        }
    }
    return ProjectionCenter{p};
}

ParamPlaneCurve project(const ParamSpaceCurve& curve, const ProjectionCenter& p,
                        const ToleranceConfig& cfg) {
    const int d = curve.degree();
    // orthonormal completion of p: columns 1..3 of the Householder basis
    Eigen::Matrix4d H = Eigen::Matrix4d::Identity();
    {
        Eigen::Vector4d u = p.point - Eigen::Vector4d::Unit(0);
        if (u.norm() > 1e-12)
            H -= 2.0 * (u * u.transpose()) / u.squaredNorm();
        // H maps e0 -> p; its columns 1..3 span the orthogonal complement
    }
    std::vector<BinaryForm> rows;
    for (int r = 1; r < 4; ++r) {
        std::vector<double> c(static_cast<size_t>(d) + 1, 0.0);
        for (int k = 0; k < 4; ++k)
            for (int j = 0; j <= d; ++j)
                c[static_cast<size_t>(j)] += H(k, r) * curve.coords.rows[static_cast<size_t>(k)].coeff(j);
        rows.emplace_back(std::move(c));
    }
    RowCurve rc(std::move(rows), d);

    // common root of all three rows: the center sits on the curve or on a
    // degenerating secant
    double scale = 0.0;
    for (const auto& row : rc.rows) scale = std::max(scale, row.max_abs());
    if (scale == 0.0) throw DegreeDrop("projection collapses the curve");
    bool inf_drop = true;
    for (const auto& row : rc.rows)
        if (std::abs(row.coeff(d)) > 1e-10 * scale) inf_drop = false;
    auto on_curve_at = [&](cdouble t, bool at_inf) {
        Eigen::Vector4cd x = at_inf ? curve.coords.eval(cdouble(0.0), cdouble(1.0))
                                    : curve.coords.eval(cdouble(1.0), t);
        Eigen::Vector4cd pc4 = p.point.cast<cdouble>();
        double num = (x - (pc4.dot(x)) * pc4).norm();
        return num < 1e-6 * x.norm();
    };
    if (inf_drop) {
        if (on_curve_at(cdouble(0.0), true)) throw CenterOnCurve();
        throw DegreeDrop("projected rows share the root at infinity");
    }
    int lead = 0;
    double best = -1;
    for (int i = 0; i < 3; ++i)
        if (rc.rows[static_cast<size_t>(i)].max_abs() > best) {
            best = rc.rows[static_cast<size_t>(i)].max_abs();
            lead = i;
        }
    Poly p0 = rc.rows[static_cast<size_t>(lead)].chart_t();
    if (p0.degree() >= 1) {
        for (const auto& cl : find_roots(p0, cfg)) {
            Eigen::Vector3cd v = rc.eval(cdouble(1.0), cl.center);
            double grow = std::pow(1.0 + std::abs(cl.center), d);
            if (v.norm() < 1e-7 * scale * grow) {
                if (std::abs(cl.center.imag()) < 1e-6 && on_curve_at(cl.center, false))
                    throw CenterOnCurve();
                throw DegreeDrop("projected rows share a common factor");
            }
        }
    }
    return ParamPlaneCurve{std::move(rc), curve.label};
}

RowCurve gauss_map_rows(const ParamPlaneCurve& curve) {
    const auto& C = curve.coords.rows;
    const int d = curve.degree();
    std::array<BinaryForm, 3> ct = {C[0].d_t(), C[1].d_t(), C[2].d_t()};
    std::vector<BinaryForm> G;
    double scale = 0.0;
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        BinaryForm g = C[static_cast<size_t>(j)] * ct[static_cast<size_t>(k)] -
                       C[static_cast<size_t>(k)] * ct[static_cast<size_t>(j)];
        scale = std::max(scale, g.max_abs());
        G.push_back(std::move(g));
    }
    if (scale == 0.0) throw DegenerateGaussMap("tangent line undefined: image is a point or a line");
    // C x C_t is homogeneously divisible by s (Euler relation at s = 0):
    // drop the top t-coefficient, which must vanish
    std::vector<BinaryForm> H;
    for (auto& g : G) {
        std::vector<double> c = g.coeffs();
        if (std::abs(c.back()) > 1e-8 * scale)
            throw DegenerateGaussMap("Gauss rows are not divisible by s");
        c.pop_back();
        H.emplace_back(std::move(c));
    }
    return RowCurve(std::move(H), 2 * d - 2);
}

std::vector<std::pair<cdouble, int>> solitary_bitangents(const ParamPlaneCurve& curve,
                                                         const ToleranceConfig& cfg) {
    const int d = curve.degree();
    if (d < 2) throw DegenerateGaussMap("line has no tangency geometry");
    RowCurve G = gauss_map_rows(curve);
    std::vector<std::pair<cdouble, int>> out;
    if (d < 4) {
        // the dual curve of a nodal image of degree <= 3 has no nodes
        return out;
    }
    int expected = 2 * (d - 2) * (d - 3);
    auto pairs = parameter_pair_collisions(G, cfg, 0xB17AULL, expected);
    for (const auto& ps : pairs) {
        if (ps.cls != PairClass::ConjugatePair || ps.t1_at_inf || ps.t2_at_inf) continue;
        cdouble tau = ps.t1.imag() > 0 ? ps.t1 : ps.t2;
        // tangency order of the (real) line G(tau) against the curve at tau
        Eigen::Vector3cd ell_c = G.eval(cdouble(1.0), tau);
        double resid = 0.0;
        Eigen::Vector3d ell = realify(ell_c, &resid);
        if (resid > 1e-5) continue;  // not actually a real line
        Poly g;
        {
            std::vector<cdouble> c(static_cast<size_t>(d) + 1, 0.0);
            for (int k = 0; k < 3; ++k)
                for (int j = 0; j <= d; ++j)
                    c[static_cast<size_t>(j)] += ell(k) * curve.coords.rows[static_cast<size_t>(k)].coeff(j);
            g = Poly(std::move(c));
        }
        double gscale = g.max_abs_coeff() * std::pow(1.0 + std::abs(tau), d);
        int order = 0;
        Poly der = g;
        while (order <= d && std::abs(der.eval(tau)) < 1e-6 * std::max(gscale, 1e-300)) {
            ++order;
            der = der.derivative();
        }
        if (order < 2) continue;  // grazing artifact, not a tangency
        out.emplace_back(tau, order - 1);
    }
    return out;
}

Diagram build_diagram(const ParamSpaceCurve& curve, const ProjectionCenter& p,
                      const ToleranceConfig& cfg) {
    const int d = curve.degree();
    Diagram dia;
    dia.center = p;
    dia.degree = d;
    dia.plane_curve = project(curve, p, cfg);

    const int expected = (d - 1) * (d - 2) / 2;
    std::vector<PairSolution> pairs;
    try {
        pairs = parameter_pair_collisions(dia.plane_curve.coords, cfg, 0xD1A6ULL, expected);
    } catch (const NoConvergence& e) {
        throw NonGenericCenter(std::string("node census did not close: ") + e.what());
    }

    // Affine chart of RP^3 whose plane at infinity passes through the center:
    // all projection fibers become parallel vertical lines, so the finite
    // chord between two strand points is always the fiber arc avoiding the
    // center, and classical crossing-sign formulas apply verbatim.  The chart
    // basis is kept positively oriented so determinants taken in it agree
    // across centers.
    const Eigen::Vector4d phat = p.point;  // unit by construction
    Eigen::Matrix4d chart;                 // rows: [ell; m1; m2; m3], det = +1
    {
        Eigen::Matrix4d H = Eigen::Matrix4d::Identity();
        Eigen::Vector4d u = phat - Eigen::Vector4d::Unit(3);
        if (u.norm() > 1e-8) H -= 2.0 * (u * u.transpose()) / u.squaredNorm();
        chart = H;  // rows 0..2 orthogonal to phat, row 3 = phat
        if (chart.determinant() < 0) chart.row(2) = -chart.row(2);
    }
    // rotate (ell, m1) within the plane orthogonal to phat until no strand
    // point sits on the chart's plane at infinity
    {
        std::vector<Eigen::Vector4cd> strands;
        for (const auto& ps : pairs) {
            if (ps.cls == PairClass::ComplexPair) continue;
            if (!ps.t1_at_inf) strands.push_back(curve.coords.eval(cdouble(1.0), ps.t1));
            if (!ps.t2_at_inf) strands.push_back(curve.coords.eval(cdouble(1.0), ps.t2));
        }
        const Eigen::Vector4d r0 = chart.row(0), r1 = chart.row(1);
        bool placed = false;
        for (int a = 0; a < 16 && !placed; ++a) {
            double phi = 2.39996322972865332 * a;  // golden-angle sweep
            Eigen::Vector4d ell = std::cos(phi) * r0 + std::sin(phi) * r1;
            double worst = 1.0;
            for (const auto& x : strands) {
                cdouble v = ell(0) * x(0) + ell(1) * x(1) + ell(2) * x(2) + ell(3) * x(3);
                worst = std::min(worst, std::abs(v) / std::max(x.norm(), 1e-300));
            }
            if (worst > 1e-3) {
                chart.row(0) = ell;
                chart.row(1) = -std::sin(phi) * r0 + std::cos(phi) * r1;
                placed = true;
            }
        }
        if (!placed) throw NonGenericCenter("no chart avoids all strand points");
    }
    const Eigen::Vector4d ell = chart.row(0);
    auto affine_c = [&](const Eigen::Vector4cd& x) {
        cdouble den = ell(0) * x(0) + ell(1) * x(1) + ell(2) * x(2) + ell(3) * x(3);
        if (std::abs(den) < 1e-8 * x.norm())
            throw NonGenericCenter("strand at the chart hyperplane");
        Eigen::Vector3cd out;
        for (int i = 0; i < 3; ++i) {
            const Eigen::Vector4d m = chart.row(i + 1);
            out(i) = (m(0) * x(0) + m(1) * x(1) + m(2) * x(2) + m(3) * x(3)) / den;
        }
        return out;
    };
    auto affine = [&](const Eigen::Vector4d& x) {
        return Eigen::Vector3d(affine_c(x.cast<cdouble>()).real());
    };
    // affine velocity d/dt of the chart image, complex t allowed
    auto affine_vel = [&](cdouble t) {
        Eigen::Vector4cd x = curve.coords.eval(cdouble(1.0), t);
        Eigen::Vector4cd x1;
        for (int i = 0; i < 4; ++i) {
            Poly pi = curve.coords.rows[static_cast<size_t>(i)].chart_t();
            x1(i) = pi.derivative().eval(t);
        }
        cdouble den = ell(0) * x(0) + ell(1) * x(1) + ell(2) * x(2) + ell(3) * x(3);
        cdouble den1 = ell(0) * x1(0) + ell(1) * x1(1) + ell(2) * x1(2) + ell(3) * x1(3);
        Eigen::Vector3cd out;
        for (int i = 0; i < 3; ++i) {
            const Eigen::Vector4d m = chart.row(i + 1);
            cdouble n = m(0) * x(0) + m(1) * x(1) + m(2) * x(2) + m(3) * x(3);
            cdouble n1 = m(0) * x1(0) + m(1) * x1(1) + m(2) * x1(2) + m(3) * x1(3);
            out(i) = (n1 * den - n * den1) / (den * den);
        }
        return out;
    };

    for (const auto& ps : pairs) {
        if (ps.multiplicity > 1)
            throw NonGenericCenter("non-transverse node cluster (tacnode or worse)");
        switch (ps.cls) {
            case PairClass::RealPair: {
                if (ps.t1_at_inf || ps.t2_at_inf)
                    throw NonGenericCenter("crossing at the parameter chart infinity");
                double t1 = ps.t1.real(), t2 = ps.t2.real();
                Eigen::Vector4d x1h = curve.coords.eval(1.0, t1).normalized();
                Eigen::Vector4d x2h = curve.coords.eval(1.0, t2).normalized();
                // the strand nearer the viewpoint (smaller geodesic distance
                // from the center in RP^3) passes over
                double c1 = std::abs(phat.dot(x1h)), c2 = std::abs(phat.dot(x2h));
                if (std::abs(c1 - c2) < 1e-10 * (c1 + c2 + 1.0))
                    throw NonGenericCenter("strands equidistant from the center");
                Crossing cr;
                cr.t_over = c1 > c2 ? t1 : t2;
                cr.t_under = c1 > c2 ? t2 : t1;
                Eigen::Vector3d x_over = affine(c1 > c2 ? x1h : x2h);
                Eigen::Vector3d x_under = affine(c1 > c2 ? x2h : x1h);
                Eigen::Vector3cd tovc = affine_vel(cdouble(cr.t_over));
                Eigen::Vector3cd tunc = affine_vel(cdouble(cr.t_under));
                Eigen::Matrix3d M;
                M.col(0) = tovc.real() * double(curve.orientation);
                M.col(1) = tunc.real() * double(curve.orientation);
                // fiber displacement from under to over; with the center at
                // the chart's infinity, the finite chord is the arc avoiding
                // the center, so no wrap correction is needed
                M.col(2) = x_over - x_under;
                double det = M.determinant();
                double scl = M.col(0).norm() * M.col(1).norm() * M.col(2).norm();
                if (std::abs(det) < 1e-9 * std::max(scl, 1e-300))
                    throw NonGenericCenter("degenerate crossing frame");
                cr.sign = det > 0 ? +1 : -1;
                Eigen::Vector3d img = dia.plane_curve.coords.eval(1.0, t1);
                cr.image = sign_normalized3(img.normalized());
                dia.crossings.push_back(cr);
                dia.census.h += 1;
                break;
            }
            case PairClass::ConjugatePair: {
                if (ps.t1_at_inf || ps.t2_at_inf)
                    throw NonGenericCenter("solitary point at the parameter chart infinity");
                SolitaryPoint sp;
                sp.tau = ps.t1.imag() > 0 ? ps.t1 : ps.t2;
                Eigen::Vector4cd xc = curve.coords.eval(cdouble(1.0), sp.tau);
                Eigen::Vector3cd x_aff = affine_c(xc);
                // in this chart the projection fiber is vertical (the center
                // sits at the chart's infinity in the e3 direction), so the
                // point is (real node) + mu * w with w = +-e3; pick the sign
                // making Im(mu) > 0
                double horiz_im = std::hypot(x_aff(0).imag(), x_aff(1).imag());
                if (horiz_im > 1e-5 * (1.0 + x_aff.norm()))
                    throw NonGenericCenter("solitary fiber failed to be vertical");
                if (std::abs(x_aff(2).imag()) < 1e-10 * (1.0 + x_aff.norm()))
                    throw NonGenericCenter("solitary point unexpectedly real");
                Eigen::Vector3d w = Eigen::Vector3d::Unit(2);
                if (x_aff(2).imag() < 0) w = -w;
                Eigen::Vector3cd u = affine_vel(sp.tau);
                Eigen::Matrix3d M;
                M.col(0) = u.real();
                M.col(1) = u.imag();
                M.col(2) = w;
                double det = M.determinant();
                double scl = M.col(0).norm() * M.col(1).norm();
                if (std::abs(det) < 1e-9 * std::max(scl, 1e-300))
                    throw NonGenericCenter("degenerate solitary frame");
                sp.sign = det > 0 ? +1 : -1;
                double rres = 0.0;
                Eigen::Vector3d img = realify(dia.plane_curve.coords.eval(cdouble(1.0), sp.tau), &rres);
                if (rres > 1e-5) throw NonGenericCenter("solitary image failed to be real");
                sp.image = sign_normalized3(img);
                dia.solitary.push_back(sp);
                dia.census.e += 1;
                break;
            }
            case PairClass::ComplexPair:
                dia.census.i += 1;
                break;
        }
    }
    if (dia.census.total() != expected)
        throw NonGenericCenter("node census does not close");
    if (dia.census.i % 2 != 0)
        throw NonGenericCenter("odd imaginary node count");

    // flexes: real roots of the plane Wronskian, in a randomized chart so
    // flexes at the parameter infinity become visible
    {
        bool done = false;
        for (int attempt = 0; attempt < 8 && !done; ++attempt) {
            auto rng = make_rng(cfg.seed, 0xF1E8ULL, static_cast<std::uint64_t>(attempt));
            std::uniform_real_distribution<double> uangle(0.05, M_PI - 0.05);
            const Mobius R = Mobius::rotation(uangle(rng));
            RowCurve cur = dia.plane_curve.coords.reparam(R);
            std::array<std::array<Poly, 3>, 3> M;
            for (int k = 0; k < 3; ++k) {
                Poly q = cur.rows[static_cast<size_t>(k)].chart_t();
                double m = q.max_abs_coeff();
                if (m > 0) q = q * cdouble(1.0 / m);
                M[0][static_cast<size_t>(k)] = q;
                M[1][static_cast<size_t>(k)] = q.derivative();
                M[2][static_cast<size_t>(k)] = M[1][static_cast<size_t>(k)].derivative();
            }
            Poly W = poly_det3(M);
            const int full = 3 * (d - 2);
            if (full == 0) {
                done = true;
                break;
            }
            if (W.max_abs_coeff() == 0.0) throw NonGenericCenter("flex polynomial vanished");
            // the degrees above 3(d-2) cancel exactly; strip float residue
            {
                std::vector<cdouble> wc = W.coeffs();
                double wmax = W.max_abs_coeff();
                for (size_t j = static_cast<size_t>(full) + 1; j < wc.size(); ++j) {
                    if (std::abs(wc[j]) > 1e-7 * wmax)
                        throw NonGenericCenter("flex polynomial exceeds its nominal degree");
                    wc[j] = 0.0;
                }
                W = Poly(std::move(wc));
            }
            if (W.degree() < full) continue;  // a flex escaped to chart infinity
            dia.flexes.clear();
            for (const auto& [t0, mult] : real_roots_with_multiplicity(W, cfg)) {
                FlexPoint fp;
                cdouble back = R.old_param(cdouble(t0));
                if (std::abs(R.m00 + R.m01 * t0) < 1e-9 * (1.0 + std::abs(t0)))
                    throw NonGenericCenter("real flex at the parameter chart infinity");
                fp.t = back.real();
                fp.multiplicity = mult;
                dia.flexes.push_back(fp);
            }
            done = true;
        }
        if (!done) throw NonGenericCenter("flexes kept escaping to chart infinity");
    }
    // a flex colliding with a node parameter means the center sees a
    // degenerate tangency picture
    for (const auto& fp : dia.flexes) {
        for (const auto& cr : dia.crossings)
            if (std::abs(fp.t - cr.t_over) < 1e2 * cfg.cluster_tol * (1.0 + std::abs(fp.t)) ||
                std::abs(fp.t - cr.t_under) < 1e2 * cfg.cluster_tol * (1.0 + std::abs(fp.t)))
                throw NonGenericCenter("flex collides with a crossing parameter");
    }

    int B = 0;
    for (const auto& [tau, omega] : solitary_bitangents(dia.plane_curve, cfg)) B += 2 * omega;
    dia.bitangent_count = B;
    return dia;
}

KleinReport klein_check(const Diagram& dia) {
    KleinReport r;
    r.F = dia.flex_total();
    r.B = dia.bitangent_count;
    r.h = dia.census.h;
    r.i = dia.census.i;
    r.d = dia.degree;
    r.lhs = r.F + r.B;
    r.rhs = r.d * (r.d - 2) - 2 * r.h - 2 * r.i;
    r.pass = (r.lhs == r.rhs);
    return r;
}

ProjectionCenter random_center(const ParamSpaceCurve& curve, const ToleranceConfig& cfg,
                               std::uint64_t salt, int k) {
    auto rng = make_rng(cfg.seed, salt, static_cast<std::uint64_t>(k));
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int tries = 0; tries < 256; ++tries) {
        Eigen::Vector4d p;
        for (int i = 0; i < 4; ++i) p(i) = gauss(rng);
        if (p.norm() < 1e-3) continue;
        p.normalize();
        if (min_angle_to_curve(curve, p) < 50.0 * cfg.geom_tol) continue;
        return ProjectionCenter::normalized(p);
    }
    throw NonGenericCenter("could not sample a center away from the curve");
}

}  // namespace rlink
