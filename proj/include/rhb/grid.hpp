#pragma once

#include <vector>

#include "rhb/types.hpp"

namespace rhb {

/// Uniform grid of N-th roots of unity with trapezoid weights.
/// Nodes are t_k = exp(2*pi*i*k/N); the weight of each node in the
/// parameterization integral (1/2pi) \int f(theta) dtheta is 1/N.
class UnitCircleGrid {
public:
    explicit UnitCircleGrid(int n);

    int size() const { return n_; }
    cplx node(int k) const { return nodes_[static_cast<size_t>(k)]; }
    const std::vector<cplx>& nodes() const { return nodes_; }
    double weight() const { return 1.0 / n_; }

private:
    int n_;
    std::vector<cplx> nodes_;
};

/// In-place radix-2 FFT, X_m = sum_k x_k exp(-2*pi*i*k*m/N).  Size must be a
/// power of two.
void fft(std::vector<cplx>& data);

/// Inverse transform, x_k = (1/N) sum_m X_m exp(+2*pi*i*k*m/N).
void ifft(std::vector<cplx>& data);

}  // namespace rhb
