#include "rhb/regularize.hpp"

#include <cmath>

namespace rhb {

Regularizers::Regularizers(std::vector<JumpData> jumps, std::vector<Mat> plus_limits, cplx anchor)
    : jumps_(std::move(jumps)), plus_limits_(std::move(plus_limits)), anchor_(anchor) {}

Mat Regularizers::omega_plus(int j, cplx z) const {
    const auto& jd = jumps_[static_cast<size_t>(j)];
    const double cut = std::arg(jd.point);
    return jd.A * plus_limits_[static_cast<size_t>(j)] * matrix_power(z - jd.point, jd.log_gamma, cut);
}

Mat Regularizers::omega_minus(int j, cplx z) const {
    const auto& jd = jumps_[static_cast<size_t>(j)];
    return jd.B * ratio_power(z, jd.point, anchor_, jd.log_gamma);
}

Mat Regularizers::product_plus(cplx z) const {
    if (jumps_.empty()) return Mat();
    Mat out = omega_plus(0, z);
    for (int j = 1; j < jump_count(); ++j) out = out * omega_plus(j, z);
    return out;
}

Mat Regularizers::product_minus(cplx z) const {
    if (jumps_.empty()) return Mat();
    Mat out = omega_minus(0, z);
    for (int j = 1; j < jump_count(); ++j) out = out * omega_minus(j, z);
    return out;
}

Regularizers build_regularizers(const PiecewiseLoop& data, cplx z0) {
    if (std::abs(z0) >= 1.0 - 1e-9) throw validation_error("anchor z0 must lie inside the disk");
    const int m = data.jump_count();
    std::vector<JumpData> jumps;
    std::vector<Mat> plus_limits;
    jumps.reserve(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
        JumpData jd;
        jd.point = data.jump_points()[static_cast<size_t>(j)];
        const Mat gp = data.limit_plus(j);
        const Mat gm = data.limit_minus(j);
        jd.jump = gp.inverse() * gm;
        jd.log_gamma = normalized_log(jd.jump);
        jumps.push_back(std::move(jd));
        plus_limits.push_back(gp);
    }
    // sequential accumulation constants; Omega_k is fully defined once A_k,
    // B_k are set, and A_j, B_j only look at k < j
    auto omega_plus_k = [&](int k, cplx z) {
        const auto& jd = jumps[static_cast<size_t>(k)];
        return Mat(jd.A * plus_limits[static_cast<size_t>(k)] *
                   matrix_power(z - jd.point, jd.log_gamma, std::arg(jd.point)));
    };
    auto omega_minus_k = [&](int k, cplx z) {
        const auto& jd = jumps[static_cast<size_t>(k)];
        return Mat(jd.B * ratio_power(z, jd.point, z0, jd.log_gamma));
    };
    for (int j = 0; j < m; ++j) {
        const int n = static_cast<int>(jumps[static_cast<size_t>(j)].jump.rows());
        if (j == 0) {
            jumps[0].A = Mat::Identity(n, n);
            jumps[0].B = Mat::Identity(n, n);
            continue;
        }
        const cplx sj = jumps[static_cast<size_t>(j)].point;
        for (int k = 0; k < j; ++k)
            if (std::abs(jumps[static_cast<size_t>(k)].point - sj) < 1e-12)
                throw validation_error("coincident jump points");
        Mat pp = Mat::Identity(n, n), pm = Mat::Identity(n, n);
        for (int k = 0; k < j; ++k) {
            pp = pp * omega_plus_k(k, sj);
            pm = pm * omega_minus_k(k, sj);
        }
        jumps[static_cast<size_t>(j)].A = pp.inverse();
        jumps[static_cast<size_t>(j)].B = pm.inverse();
    }
    return Regularizers(std::move(jumps), std::move(plus_limits), z0);
}

Mat regularized_symbol(const Regularizers& reg, const PiecewiseLoop& data, cplx t) {
    Mat g = data.evaluate(t);
    if (reg.jump_count() == 0) return g;
    return reg.product_plus(t).inverse() * g * reg.product_minus(t);
}

namespace {

/// Iterated Aitken delta-squared acceleration of a geometric-error sequence,
/// applied entrywise.
Mat aitken_limit(const std::vector<Mat>& values) {
    std::vector<Mat> v = values;
    while (v.size() >= 3) {
        std::vector<Mat> next;
        for (size_t m = 0; m + 2 < v.size(); ++m) {
            Mat out = v[m + 2];
            for (int r = 0; r < out.rows(); ++r)
                for (int c = 0; c < out.cols(); ++c) {
                    const cplx d1 = v[m + 1](r, c) - v[m](r, c);
                    const cplx d2 = v[m + 2](r, c) - v[m + 1](r, c);
                    const cplx den = d2 - d1;
                    if (std::abs(den) > 1e-14 * (std::abs(d1) + std::abs(d2)) && std::abs(den) > 0)
                        out(r, c) = v[m + 2](r, c) - d2 * d2 / den;
                }
            next.push_back(std::move(out));
        }
        v = std::move(next);
        if (v.size() <= 4) break;
    }
    return v.back();
}

}  // namespace

RegularizedLoop regularize_transmission(const PiecewiseLoop& data, cplx z0,
                                        const RegularizeOptions& opts) {
    Regularizers reg = build_regularizers(data, z0);
    const int N = opts.grid_size;
    UnitCircleGrid grid(N);

    // the sampling grid must avoid the jump points
    for (cplx s : data.jump_points())
        for (int k = 0; k < N; ++k)
            if (std::abs(grid.node(k) - s) < 1e-9)
                throw validation_error("a grid node coincides with a jump point; move the jumps or change N");

    std::vector<Mat> samples;
    samples.reserve(static_cast<size_t>(N));
    double scale = 1.0;
    for (int k = 0; k < N; ++k) {
        samples.push_back(regularized_symbol(reg, data, grid.node(k)));
        scale = std::max(scale, samples.back().norm());
    }
    LoopSampleOptions lopt;
    lopt.tail_tolerance = 1e-12;
    lopt.enforce_tail = false;  // G_1 is continuous but only Hoelder at the jumps
    RegularizedLoop out{loop_from_samples(samples, lopt), {}, {}, {}};

    for (int j = 0; j < data.jump_count(); ++j) {
        const cplx s = data.jump_points()[static_cast<size_t>(j)];
        const double a = std::arg(s);
        std::vector<Mat> up, dn;
        double h = opts.offset_start;
        for (int m = 0; m < opts.offset_count; ++m, h *= 0.5) {
            up.push_back(regularized_symbol(reg, data, std::polar(1.0, a + h)));
            dn.push_back(regularized_symbol(reg, data, std::polar(1.0, a - h)));
        }
        Mat lp = aitken_limit(up);
        Mat lm = aitken_limit(dn);
        const double defect = (lp - lm).norm();
        out.limit_plus.push_back(std::move(lp));
        out.limit_minus.push_back(std::move(lm));
        out.jump_defect.push_back(defect);
        if (defect > opts.defect_tol * scale)
            throw numerical_error("one-sided limits of the regularized symbol disagree at jump " +
                                  std::to_string(j) + " (defect " + std::to_string(defect) + ")");
    }
    return out;
}

}  // namespace rhb
