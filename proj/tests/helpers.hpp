#pragma once

#include <random>
#include <string>
#include <vector>

#include <rlink/curve.hpp>

namespace testutil {

/// Curve from dense row coefficient lists (short rows are zero-padded).
inline rlink::ParamSpaceCurve mk(std::vector<std::vector<double>> rows, int d,
                                 const std::string& label, int orientation = +1) {
    std::vector<rlink::BinaryForm> bf;
    for (auto& r : rows) {
        r.resize(static_cast<size_t>(d) + 1, 0.0);
        bf.emplace_back(std::move(r));
    }
    return {rlink::RowCurve{std::move(bf), d}, orientation, label};
}

inline rlink::ParamSpaceCurve twisted_cubic() {
    return mk({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}, 3, "tc");
}

/// Seeded random curve with standard-normal coefficients.
inline rlink::ParamSpaceCurve random_curve(int degree, std::mt19937_64& rng,
                                           const std::string& label) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<rlink::BinaryForm> rows;
    for (int r = 0; r < 4; ++r) {
        std::vector<double> c(static_cast<size_t>(degree) + 1);
        for (auto& x : c) x = g(rng);
        rows.emplace_back(std::move(c));
    }
    return {rlink::RowCurve{std::move(rows), degree}, +1, label};
}

}  // namespace testutil
