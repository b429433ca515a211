#pragma once

#include <functional>
#include <vector>

#include "rhb/types.hpp"

namespace rhb::detail {

/// One smooth piece of an integration path, parameterized on u in [0, 1].
struct PathLeg {
    std::function<cplx(double)> z;
    std::function<cplx(double)> dz;
};

inline PathLeg line_leg(cplx a, cplx b) {
    return {[a, b](double u) { return a + u * (b - a); }, [a, b](double) { return b - a; }};
}

/// Circular arc around center with radius r from angle th0 to th1 (signed).
inline PathLeg arc_leg(cplx center, double r, double th0, double th1) {
    return {[=](double u) { return center + std::polar(r, th0 + u * (th1 - th0)); },
            [=](double u) { return iu * (th1 - th0) * std::polar(r, th0 + u * (th1 - th0)); }};
}

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-13;
    double h_init = 1e-2;
    int max_steps = 2'000'000;
    /// distance to the nearest singular point; steps are clamped to a
    /// fraction of it (ignored when absent)
    std::function<double(cplx)> min_distance;
};

/// Transfer matrix of dY/du = dz(u) A(z(u)) Y along one leg, Y(0) = I, by the
/// adaptive Dormand-Prince 5(4) scheme.
Mat transfer_matrix(const std::function<Mat(cplx)>& coeff, const PathLeg& leg, int dim,
                    const OdeOptions& opts);

/// Transfer along a chain of legs (left composition, last leg leftmost).
Mat transfer_matrix(const std::function<Mat(cplx)>& coeff, const std::vector<PathLeg>& legs,
                    int dim, const OdeOptions& opts);

}  // namespace rhb::detail
