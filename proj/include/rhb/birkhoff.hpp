#pragma once

#include <vector>

#include "rhb/loop.hpp"

namespace rhb {

/// Weakly decreasing integer multiindex K = (k_1, ..., k_n): the partial
/// indices of a symbol, equivalently the splitting type of the associated
/// bundle on the sphere.
class SplittingType {
public:
    explicit SplittingType(std::vector<int> k);

    int rank() const { return static_cast<int>(k_.size()); }
    int entry(int i) const { return k_[static_cast<size_t>(i)]; }
    const std::vector<int>& entries() const { return k_; }
    int sum() const;
    int top() const { return k_.front(); }
    int bottom() const { return k_.back(); }

    bool operator==(const SplittingType& other) const { return k_ == other.k_; }

private:
    std::vector<int> k_;
};

struct PartialIndexOptions {
    int truncation = 0;       // 0: use 4*(degree span) + 16
    double rank_cutoff = 1e-8;
    int max_doublings = 3;
};

/// Partial indices of an invertible symbol, recovered from the kernel
/// dimension profile of shifted finite-section Toeplitz operators:
/// dim(m) = sum_i max(k_i - m + 1, 0).
SplittingType partial_indices(const MatrixLoop& G, const PartialIndexOptions& opts = {});

/// Kernel dimension of the bounded-at-infinity transmission problem for the
/// shifted symbol t^{-shift} G (finite Toeplitz section of order truncation).
int toeplitz_kernel_dim(const MatrixLoop& G, int shift, int truncation, double rank_cutoff = 1e-8);

/// Birkhoff factorization G = f^- d_K f^+ with f^- holomorphically invertible
/// outside the circle, f^-(inf) = identity, and f^+ inside.
struct Factorization {
    MatrixLoop minus;
    SplittingType type;
    MatrixLoop plus;

    /// Grid sup-norm of G - f^- d_K f^+.
    double residual(const MatrixLoop& G) const;
};

struct FactorizeOptions {
    int plus_truncation = 48;  // Taylor order for (f^+)^{-1}; doubled on failure
    int grid_size = 256;
    double residual_tol = 1e-8;
    int max_doublings = 4;
};

Factorization factorize(const MatrixLoop& G, const FactorizeOptions& opts = {});

struct StratumInvariants {
    long long dim_HK = 0;  // sum over k_i >= k_j of (k_i - k_j + 1)
    long long codim = 0;   // sum over k_i > k_j of (k_i - k_j - 1)
};

StratumInvariants stratum_invariants(const SplittingType& K);

/// Bojarski stability criterion on the sphere: k_1 - k_n <= 1.
bool is_stable(const SplittingType& K);

}  // namespace rhb
