#include "rlink/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <vector>

namespace rlink {

namespace {

struct PlanePoint {
    double x = 0.0, y = 0.0;
    bool finite = false;
};

PlanePoint affine_image(const RowCurve& rows, double theta) {
    const double s = std::cos(theta), t = std::sin(theta);
    Eigen::Vector3d v;
    for (int k = 0; k < 3; ++k) v(k) = rows.rows[static_cast<size_t>(k)].eval(s, t);
    double n = v.norm();
    PlanePoint p;
    if (n == 0.0) return p;
    if (std::abs(v(2)) < 2e-2 * n) return p;  // too close to the chart's line at infinity
    p.x = v(0) / v(2);
    p.y = v(1) / v(2);
    p.finite = true;
    return p;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::string render_diagram_svg(const Diagram& diagram, int theta_samples) {
    const RowCurve& rows = diagram.plane_curve.coords;
    const int N = std::max(theta_samples, 64);

    std::vector<PlanePoint> pts(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i)
        pts[static_cast<size_t>(i)] = affine_image(rows, M_PI * i / N);

    // robust bounds: middle 96% of finite samples per axis, padded
    std::vector<double> xs, ys;
    for (const auto& p : pts)
        if (p.finite) { xs.push_back(p.x); ys.push_back(p.y); }
    if (xs.size() < 2) return "<svg xmlns=\"http://www.w3.org/2000/svg\"/>\n";
    auto pct = [](std::vector<double>& v, double q) {
        size_t k = static_cast<size_t>(q * (static_cast<double>(v.size()) - 1.0));
        std::nth_element(v.begin(), v.begin() + static_cast<long>(k), v.end());
        return v[k];
    };
    double x_lo = pct(xs, 0.02), x_hi = pct(xs, 0.98);
    double y_lo = pct(ys, 0.02), y_hi = pct(ys, 0.98);
    double span = std::max({x_hi - x_lo, y_hi - y_lo, 1e-6});
    double cx = 0.5 * (x_lo + x_hi), cy = 0.5 * (y_lo + y_hi);
    double half = 0.62 * span;
    const double view = 800.0;
    auto X = [&](double x) { return (x - (cx - half)) / (2.0 * half) * view; };
    auto Y = [&](double y) { return view - (y - (cy - half)) / (2.0 * half) * view; };
    auto visible = [&](const PlanePoint& p) {
        return p.finite && std::abs(p.x - cx) < 4.0 * half && std::abs(p.y - cy) < 4.0 * half;
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 800\">\n";
    out << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";

    auto emit_path = [&](const std::vector<PlanePoint>& seq, const char* cls, const char* stroke,
                         double width) {
        bool open = false;
        std::ostringstream d;
        for (size_t i = 0; i < seq.size(); ++i) {
            if (!visible(seq[i])) { open = false; continue; }
            if (open && i > 0 && visible(seq[i - 1])) {
                double jump = std::hypot(seq[i].x - seq[i - 1].x, seq[i].y - seq[i - 1].y);
                if (jump > half) open = false;  // wrapped through infinity
            }
            d << (open ? " L " : " M ") << fmt(X(seq[i].x)) << " " << fmt(Y(seq[i].y));
            open = true;
        }
        std::string body = d.str();
        if (!body.empty())
            out << "<path class=\"" << cls << "\" d=\"" << body << "\" fill=\"none\" stroke=\"" << stroke
                << "\" stroke-width=\"" << fmt(width) << "\"/>\n";
    };

    emit_path(pts, "curve", "black", 2.0);

    // crossings: white gap over the under-strand, then the over-strand redrawn
    const double gap = 0.022 * view;
    for (const auto& cr : diagram.crossings) {
        Eigen::Vector3d v = cr.image;
        if (std::abs(v(2)) < 1e-9) continue;
        double px = v(0) / v(2), py = v(1) / v(2);
        out << "<circle class=\"gap\" cx=\"" << fmt(X(px)) << "\" cy=\"" << fmt(Y(py)) << "\" r=\""
            << fmt(gap) << "\" fill=\"white\"/>\n";
        // local arc of the over-strand through the gap
        double th = std::atan(cr.t_over);
        if (th < 0) th += M_PI;
        std::vector<PlanePoint> arc;
        const int M = 48;
        const double dth = 4.0 * M_PI / N;
        for (int i = -M; i <= M; ++i)
            arc.push_back(affine_image(rows, th + dth * i / M));
        emit_path(arc, "over", "black", 2.0);
    }

    // flex ticks: short stroke normal to the curve at the flex
    for (const auto& fp : diagram.flexes) {
        double th = std::atan(fp.t);
        if (th < 0) th += M_PI;
        PlanePoint p0 = affine_image(rows, th - 1e-4);
        PlanePoint p1 = affine_image(rows, th + 1e-4);
        PlanePoint pm = affine_image(rows, th);
        if (!p0.finite || !p1.finite || !pm.finite) continue;
        double tx = p1.x - p0.x, ty = p1.y - p0.y;
        double n = std::hypot(tx, ty);
        if (n == 0.0) continue;
        double nx = -ty / n, ny = tx / n;
        double len = 0.016 * (2.0 * half);
        out << "<line class=\"flex\" x1=\"" << fmt(X(pm.x - nx * len)) << "\" y1=\"" << fmt(Y(pm.y - ny * len))
            << "\" x2=\"" << fmt(X(pm.x + nx * len)) << "\" y2=\"" << fmt(Y(pm.y + ny * len))
            << "\" stroke=\"blue\" stroke-width=\"2.00\"/>\n";
    }

    // solitary double points: filled dots
    for (const auto& sp : diagram.solitary) {
        Eigen::Vector3d v = sp.image;
        if (std::abs(v(2)) < 1e-9) continue;
        out << "<circle class=\"solitary\" cx=\"" << fmt(X(v(0) / v(2))) << "\" cy=\"" << fmt(Y(v(1) / v(2)))
            << "\" r=\"4.00\" fill=\"red\"/>\n";
    }

    out << "</svg>\n";
    return out.str();
}

}  // namespace rlink
