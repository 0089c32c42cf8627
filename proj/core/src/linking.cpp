#include "rlink/linking.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rlink/errors.hpp"

namespace rlink {

namespace {

constexpr double kChordMax = 1.8e-2;   // LiftedLoop continuity budget (< quad_step * 10)
constexpr double kSagittaTol = 2e-4;   // polyline deviation budget (<< push-off eps / 2)

Eigen::Vector4d eval_unit(const ParamSpaceCurve& curve, double theta) {
    Eigen::Vector4d x = curve.coords.eval(std::cos(theta), std::sin(theta));
    double n = x.norm();
    if (n < 1e-300) throw DegenerateCurve("curve representative vanished while sampling");
    return x / n;
}

struct BaseSampling {
    std::vector<double> theta;           // increasing in [0, pi)
    std::vector<Eigen::Vector4d> y;      // continuous unit lifts
    int closure_sign = 1;                // y(pi) = closure_sign * y(0)
};

BaseSampling sample_base(const ParamSpaceCurve& curve, const ToleranceConfig& cfg) {
    const double chord_max = std::min(kChordMax, cfg.quad_step * 9.0);
    std::vector<std::pair<double, Eigen::Vector4d>> pts;
    const int N0 = 64;
    for (int i = 0; i < N0; ++i) {
        double th = M_PI * i / N0;
        Eigen::Vector4d v = eval_unit(curve, th);
        if (i > 0 && v.dot(pts.back().second) < 0) v = -v;
        pts.emplace_back(th, v);
    }
    // terminal sample at pi for refinement bookkeeping (dropped afterwards)
    {
        Eigen::Vector4d v = eval_unit(curve, M_PI);
        if (v.dot(pts.back().second) < 0) v = -v;
        pts.emplace_back(M_PI, v);
    }
    for (size_t i = 0; i + 1 < pts.size();) {
        const auto& [ta, ya] = pts[i];
        const auto& [tb, yb] = pts[i + 1];
        double tm = 0.5 * (ta + tb);
        Eigen::Vector4d ym = eval_unit(curve, tm);
        if (ym.dot(ya) < 0) ym = -ym;
        bool split = (yb - ya).norm() > chord_max ||
                     (ym - 0.5 * (ya + yb)).norm() > kSagittaTol;
        if (split) {
            if (tb - ta < 1e-12)
                throw SamplingTooCoarse("parameter interval collapsed during refinement");
            pts.insert(pts.begin() + static_cast<long>(i) + 1, {tm, ym});
        } else {
            ++i;
        }
    }
    BaseSampling out;
    Eigen::Vector4d y_end = pts.back().second;
    pts.pop_back();
    out.theta.reserve(pts.size());
    out.y.reserve(pts.size());
    for (auto& [th, v] : pts) {
        out.theta.push_back(th);
        out.y.push_back(v);
    }
    double c = y_end.dot(out.y.front());
    if (std::abs(c) < 0.5)
        throw SamplingTooCoarse("closure representative ambiguous");
    out.closure_sign = c > 0 ? +1 : -1;
    return out;
}

/// Closed polyline carried by a LiftedLoop.  Inputs to lk are already full
/// preimages (lift() emits both antipodal copies of an even-class loop), so an
/// AntipodalArc is completed into its doubled loop and a Loop passes through.
std::vector<Eigen::Vector4d> closed_polyline(const LiftedLoop& loop) {
    if (loop.closure == LoopClosure::AntipodalArc) {
        std::vector<Eigen::Vector4d> s = loop.samples;
        s.reserve(2 * loop.samples.size());
        for (const auto& v : loop.samples) s.push_back(-v);
        return s;
    }
    return loop.samples;
}

/// Gauss linking number of two closed polylines in R^3 (exact per segment
/// pair, Banchoff / solid-angle form).
double gauss_linking(const std::vector<Eigen::Vector3d>& P, const std::vector<Eigen::Vector3d>& Q) {
    auto safe_unit_cross = [](const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                              bool& ok) -> Eigen::Vector3d {
        Eigen::Vector3d c = a.cross(b);
        double n = c.norm();
        if (n < 1e-14) { ok = false; return Eigen::Vector3d::Zero(); }
        ok = true;
        return c / n;
    };
    auto casin = [](double x) { return std::asin(std::clamp(x, -1.0, 1.0)); };
    double total = 0.0;
    const size_t np = P.size(), nq = Q.size();
    for (size_t i = 0; i < np; ++i) {
        const Eigen::Vector3d& r1 = P[i];
        const Eigen::Vector3d& r2 = P[(i + 1) % np];
        Eigen::Vector3d r12 = r2 - r1;
        for (size_t j = 0; j < nq; ++j) {
            const Eigen::Vector3d& r3 = Q[j];
            const Eigen::Vector3d& r4 = Q[(j + 1) % nq];
            Eigen::Vector3d r34 = r4 - r3;
            Eigen::Vector3d r13 = r3 - r1, r14 = r4 - r1;
            Eigen::Vector3d r23 = r3 - r2, r24 = r4 - r2;
            bool o1, o2, o3, o4;
            Eigen::Vector3d n1 = safe_unit_cross(r13, r14, o1);
            Eigen::Vector3d n2 = safe_unit_cross(r14, r24, o2);
            Eigen::Vector3d n3 = safe_unit_cross(r24, r23, o3);
            Eigen::Vector3d n4 = safe_unit_cross(r23, r13, o4);
            if (!(o1 && o2 && o3 && o4)) continue;  // coplanar: zero solid angle
            double omega = casin(n1.dot(n2)) + casin(n2.dot(n3)) +
                           casin(n3.dot(n4)) + casin(n4.dot(n1));
            double sgn = (r34.cross(r12)).dot(r13);
            total += (sgn > 0 ? 1.0 : (sgn < 0 ? -1.0 : 0.0)) * omega;
        }
    }
    return total / (4.0 * M_PI);
}

}  // namespace

std::vector<LiftedLoop> lift(const ParamSpaceCurve& curve, const ToleranceConfig& cfg) {
    BaseSampling bs = sample_base(curve, cfg);
    std::vector<LiftedLoop> out;
    if (bs.closure_sign < 0) {
        out.push_back({std::move(bs.y), LoopClosure::AntipodalArc, curve.orientation});
    } else {
        LiftedLoop a{bs.y, LoopClosure::Loop, curve.orientation};
        LiftedLoop b;
        b.closure = LoopClosure::Loop;
        b.orientation = curve.orientation;
        b.samples.reserve(bs.y.size());
        for (const auto& v : bs.y) b.samples.push_back(-v);
        out.push_back(std::move(a));
        out.push_back(std::move(b));
    }
    return out;
}

std::vector<LiftedLoop> lift(const SampledLoop& loop, const ToleranceConfig&) {
    std::vector<LiftedLoop> out;
    if (loop.antipodal_closure) {
        out.push_back({loop.pts, LoopClosure::AntipodalArc, loop.orientation});
    } else {
        out.push_back({loop.pts, LoopClosure::Loop, loop.orientation});
        LiftedLoop b;
        b.closure = LoopClosure::Loop;
        b.orientation = loop.orientation;
        b.samples.reserve(loop.pts.size());
        for (const auto& v : loop.pts) b.samples.push_back(-v);
        out.push_back(std::move(b));
    }
    return out;
}

HalfInt lk(const std::vector<LiftedLoop>& A, const std::vector<LiftedLoop>& B,
           const ToleranceConfig& cfg, double* raw_out) {
    std::vector<std::pair<std::vector<Eigen::Vector4d>, int>> la, lb;
    for (const auto& l : A) la.emplace_back(closed_polyline(l), l.orientation);
    for (const auto& l : B) lb.emplace_back(closed_polyline(l), l.orientation);

    // disjointness in RP^3 (chordal distance modulo antipode)
    double dmin = 2.0;
    for (const auto& [sa, oa] : la)
        for (const auto& va : sa)
            for (const auto& [sb, ob] : lb)
                for (const auto& vb : sb)
                    dmin = std::min(dmin, std::min((va - vb).norm(), (va + vb).norm()));
    if (dmin < cfg.geom_tol) throw CurvesIntersect();

    // stereographic pole: keep all samples away from the pole
    auto score = [&](const Eigen::Vector4d& e) {
        double worst = 0.0;
        for (const auto& [s, o] : la)
            for (const auto& v : s) worst = std::max(worst, std::abs(e.dot(v)));
        for (const auto& [s, o] : lb)
            for (const auto& v : s) worst = std::max(worst, std::abs(e.dot(v)));
        return worst;
    };
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::Vector4d pole = Eigen::Vector4d::Unit(3);
    double best = score(pole);
    for (int i = 0; i < 96 && best > 0.35; ++i) {
        Eigen::Vector4d e;
        for (int k = 0; k < 4; ++k) e(k) = gauss(rng);
        if (e.norm() < 1e-6) continue;
        e.normalize();
        double s = score(e);
        if (s < best) { best = s; pole = e; }
    }
    if (best > 0.999) throw Error("lk: no usable stereographic pole");

    Eigen::Matrix4d H = Eigen::Matrix4d::Identity();
    {
        Eigen::Vector4d u = pole - Eigen::Vector4d::Unit(0);
        if (u.norm() > 1e-12) H -= 2.0 * (u * u.transpose()) / u.squaredNorm();
    }
    auto stereo = [&](const std::vector<Eigen::Vector4d>& s) {
        std::vector<Eigen::Vector3d> out;
        out.reserve(s.size());
        for (const auto& v : s) {
            double den = 1.0 - pole.dot(v);
            Eigen::Vector3d u;
            for (int k = 0; k < 3; ++k) u(k) = H.col(k + 1).dot(v) / den;
            out.push_back(u);
        }
        return out;
    };

    double total = 0.0;
    for (const auto& [sa, oa] : la) {
        std::vector<Eigen::Vector3d> pa = stereo(sa);
        for (const auto& [sb, ob] : lb) {
            std::vector<Eigen::Vector3d> pb = stereo(sb);
            total += oa * ob * gauss_linking(pa, pb);
        }
    }
    double raw = 0.5 * total;  // RP^3 value
    if (raw_out) *raw_out = raw;
    return HalfInt::round(raw, 0.1);
}

HalfInt lk(const ParamSpaceCurve& A, const ParamSpaceCurve& B, const ToleranceConfig& cfg,
           double* raw_out) {
    return lk(lift(A, cfg), lift(B, cfg), cfg, raw_out);
}

namespace {

struct FramedSampling {
    BaseSampling base;
    std::vector<Eigen::Vector4d> w;  // unit framing directions, continuous
    int w_closure_sign = 1;          // w(pi) = sign * w(0) (relative to base closure lift)
};

FramedSampling framed_sampling(const ParamSpaceCurve& curve, const FramingKind& framing,
                               const ToleranceConfig& cfg) {
    FramedSampling fs;
    fs.base = sample_base(curve, cfg);
    const auto& rows = curve.coords.rows;
    auto theta_derivs = [&](double th, Eigen::Vector4d& x, Eigen::Vector4d& x1,
                            Eigen::Vector4d& x2) {
        double s = std::cos(th), t = std::sin(th);
        for (int k = 0; k < 4; ++k) {
            const BinaryForm& r = rows[static_cast<size_t>(k)];
            BinaryForm rs = r.d_s(), rt = r.d_t();
            x(k) = r.eval(s, t);
            x1(k) = -t * rs.eval(s, t) + s * rt.eval(s, t);
            x2(k) = t * t * rs.d_s().eval(s, t) - 2 * s * t * rs.d_t().eval(s, t) +
                    s * s * rt.d_t().eval(s, t) - s * rs.eval(s, t) - t * rt.eval(s, t);
        }
    };
    auto direction_at = [&](double th, const Eigen::Vector4d& y,
                            const Eigen::Vector4d* prev) -> Eigen::Vector4d {
        Eigen::Vector4d x, x1, x2;
        theta_derivs(th, x, x1, x2);
        // x = +-|x| y, so x1 spans the tangent direction of the unit lift
        Eigen::Vector4d t4 = x1 - x1.dot(y) * y;
        if (t4.norm() < 1e-12 * (x1.norm() + 1.0))
            throw FramingDegenerate("vanishing tangent while framing");
        Eigen::Vector4d that = t4.normalized();
        Eigen::Vector4d raw;
        if (framing.kind == FramingKind::Osculating) {
            raw = x2;
            double xsign = x.dot(y) > 0 ? 1.0 : -1.0;
            raw *= xsign;  // makes the r'' direction canonical on the lift
        } else {
            raw = framing.center.point;
        }
        Eigen::Vector4d w = raw - raw.dot(y) * y - raw.dot(that) * that;
        if (w.norm() < 1e-8 * (raw.norm() + 1e-300)) {
            throw FramingDegenerate(framing.kind == FramingKind::Osculating
                                        ? "curvature vanishes (osculating frame undefined)"
                                        : "center lies on a tangent line");
        }
        w.normalize();
        return w;
    };
    fs.w.reserve(fs.base.y.size());
    for (size_t k = 0; k < fs.base.y.size(); ++k)
        fs.w.push_back(direction_at(fs.base.theta[k], fs.base.y[k], nullptr));
    // w is an intrinsically continuous field of the lift (no sign choice);
    // where it rotates fast (center near the tangent surface) refine locally
    for (size_t k = 1; k < fs.w.size();) {
        if (fs.w[k].dot(fs.w[k - 1]) >= 0.95) { ++k; continue; }
        if (fs.base.theta[k] - fs.base.theta[k - 1] < 1e-10 || fs.w.size() > 200000)
            throw FramingDegenerate("framing direction not resolvable by refinement");
        double tm = 0.5 * (fs.base.theta[k - 1] + fs.base.theta[k]);
        Eigen::Vector4d ym = eval_unit(curve, tm);
        if (ym.dot(fs.base.y[k - 1]) < 0) ym = -ym;
        long idx = static_cast<long>(k);
        fs.base.theta.insert(fs.base.theta.begin() + idx, tm);
        fs.base.y.insert(fs.base.y.begin() + idx, ym);
        fs.w.insert(fs.w.begin() + idx, direction_at(tm, ym, nullptr));
    }
    // closure of the framing field
    Eigen::Vector4d y_end = fs.base.closure_sign * fs.base.y.front();
    Eigen::Vector4d w_end;
    {
        Eigen::Vector4d x, x1, x2;
        theta_derivs(M_PI, x, x1, x2);
        Eigen::Vector4d t4 = x1 - (x1.dot(y_end)) * y_end;
        Eigen::Vector4d that = t4.normalized();
        Eigen::Vector4d raw;
        if (framing.kind == FramingKind::Osculating) {
            raw = x2 * (x.dot(y_end) > 0 ? 1.0 : -1.0);
        } else {
            raw = framing.center.point;
        }
        w_end = raw - raw.dot(y_end) * y_end - raw.dot(that) * that;
        if (w_end.norm() < 1e-12) throw FramingDegenerate("framing degenerate at closure");
        w_end.normalize();
    }
    double cw = w_end.dot(fs.w.front());
    if (std::abs(cw) < 0.5) throw SamplingTooCoarse("framing closure ambiguous");
    fs.w_closure_sign = cw > 0 ? +1 : -1;
    return fs;
}

}  // namespace

SampledLink push_off(const ParamSpaceCurve& curve, const FramingKind& framing, double eps,
                     const ToleranceConfig& cfg) {
    if (framing.kind == FramingKind::Osculating) {
        auto cusp = curvature_vanishing_params(curve, cfg);
        if (!cusp.empty())
            throw FramingDegenerate("curvature vanishes near t = " + std::to_string(cusp.front()));
    }
    FramedSampling fs = framed_sampling(curve, framing, cfg);
    const size_t N = fs.base.y.size();
    const int c = fs.base.closure_sign;
    const int cw = fs.w_closure_sign;
    SampledLink out;
    auto push = [&](double sgn) {
        std::vector<Eigen::Vector4d> pts;
        pts.reserve(N);
        for (size_t k = 0; k < N; ++k)
            pts.push_back((fs.base.y[k] + sgn * eps * fs.w[k]).normalized());
        return pts;
    };
    if (cw == c) {
        // annulus: both one-sided boundaries close like the core
        SampledLoop plus{push(+1.0), c < 0, curve.orientation};
        SampledLoop minus{push(-1.0), c < 0, curve.orientation};
        out.components.push_back(std::move(plus));
        out.components.push_back(std::move(minus));
    } else {
        // Moebius band: single boundary of doubled length, closes plainly
        std::vector<Eigen::Vector4d> pts = push(+1.0);
        std::vector<Eigen::Vector4d> second = push(-1.0);
        pts.reserve(2 * N);
        for (const auto& v : second) pts.push_back(double(c) * v);
        out.components.push_back(SampledLoop{std::move(pts), false, curve.orientation});
    }
    out.min_gap = eps;  // nominal; the lk disjointness gate re-measures
    return out;
}

HalfInt self_linking(const ParamSpaceCurve& curve, const FramingKind& framing,
                     const ToleranceConfig& cfg, double* raw_out) {
    std::vector<LiftedLoop> core = lift(curve, cfg);
    // eps schedule anchored to the curve's self-proximity
    double min_gap = 2.0;
    {
        const auto& s = core.front().samples;
        for (size_t i = 0; i < s.size(); ++i)
            for (size_t j = i + 8; j < s.size(); ++j) {
                if (i == 0 && j + 8 > s.size()) continue;  // wrap adjacency
                min_gap = std::min(min_gap, std::min((s[i] - s[j]).norm(), (s[i] + s[j]).norm()));
            }
    }
    double eps0 = std::min(1e-3, min_gap / 10.0);

    auto value_at = [&](double eps, double* raw) {
        SampledLink band = push_off(curve, framing, eps, cfg);
        long long twice_sum = 0;
        double raw_sum = 0.0;
        for (const auto& comp : band.components) {
            double r = 0.0;
            HalfInt v = lk(core, lift(comp, cfg), cfg, &r);
            twice_sum += v.twice;
            raw_sum += r;
        }
        if (raw) *raw = raw_sum / 2.0;
        // self-linking is half the total boundary linking
        if (twice_sum % 2 != 0)
            throw RoundingUnsafe("band boundary linking is an odd half-unit; cannot halve");
        return HalfInt{twice_sum / 2};
    };
    HalfInt v1 = value_at(eps0, raw_out);
    HalfInt v2 = value_at(eps0 / 2.0, nullptr);
    if (v1.twice != v2.twice)
        throw UnstableEps("self-linking differs between eps and eps/2");
    return v1;
}

HalfInt blackboard_from_diagram(const Diagram& diagram) {
    long long s = 0;
    for (const auto& cr : diagram.crossings) s += cr.sign;
    return HalfInt::whole(s);
}

}  // namespace rlink
