#include "rhb/grid.hpp"

#include <cmath>

namespace rhb {

UnitCircleGrid::UnitCircleGrid(int n) : n_(n) {
    if (!is_power_of_two(n)) throw validation_error("grid size must be a positive power of two");
    nodes_.resize(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        double th = 2.0 * pi * k / n;
        nodes_[static_cast<size_t>(k)] = cplx(std::cos(th), std::sin(th));
    }
}

namespace {

void fft_core(std::vector<cplx>& a, bool inverse) {
    const size_t n = a.size();
    if (n < 2) return;
    // bit reversal
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        double ang = 2.0 * pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        cplx wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            cplx w(1.0);
            for (size_t k = 0; k < len / 2; ++k) {
                cplx u = a[i + k];
                cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        for (auto& x : a) x /= static_cast<double>(n);
    }
}

}  // namespace

void fft(std::vector<cplx>& data) {
    if (!is_power_of_two(static_cast<int>(data.size())))
        throw validation_error("fft size must be a power of two");
    fft_core(data, false);
}

void ifft(std::vector<cplx>& data) {
    if (!is_power_of_two(static_cast<int>(data.size())))
        throw validation_error("fft size must be a power of two");
    fft_core(data, true);
}

}  // namespace rhb
