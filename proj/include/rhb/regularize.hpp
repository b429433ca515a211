#pragma once

#include <vector>

#include "rhb/loop.hpp"
#include "rhb/matfun.hpp"

namespace rhb {

/// Per-jump regularization data: jump matrix, its normalized logarithm, and
/// the accumulation constants of the product recursion.
struct JumpData {
    cplx point;     // s_j
    Mat jump;       // G^j = G(s_j+0)^{-1} G(s_j-0)
    Mat log_gamma;  // Gamma^j = (1/2 pi i) ln G^j, eigenvalues in [0, 1)
    Mat A;          // A_1 = E, A_j = [prod_{k<j} Omega_k^+(s_j)]^{-1}
    Mat B;          // B_1 = E, B_j = [prod_{k<j} Omega_k^-(s_j)]^{-1}
};

/// The factors Omega_j^+(z) = A_j G(s_j+0) (z-s_j)^{Gamma_j} (cut along the
/// outward radial ray from s_j) and Omega_j^-(z) = B_j ((z-s_j)/(z-z0))^{Gamma_j}
/// (cut along the segment from z0 to s_j).
class Regularizers {
public:
    Regularizers(std::vector<JumpData> jumps, std::vector<Mat> plus_limits, cplx anchor);

    int jump_count() const { return static_cast<int>(jumps_.size()); }
    const std::vector<JumpData>& jumps() const { return jumps_; }
    cplx anchor() const { return anchor_; }

    Mat omega_plus(int j, cplx z) const;
    Mat omega_minus(int j, cplx z) const;
    /// prod_{j=1}^m Omega_j^{+-}(z), factors in index order, j = 1 leftmost.
    Mat product_plus(cplx z) const;
    Mat product_minus(cplx z) const;

private:
    std::vector<JumpData> jumps_;
    std::vector<Mat> plus_limits_;  // G(s_j + 0)
    cplx anchor_;                   // z0, interior
};

/// Jump matrices, normalized logs, and accumulation constants for all jumps
/// of a piecewise loop.  The A_j, B_j recursion is sequential in j.
Regularizers build_regularizers(const PiecewiseLoop& data, cplx z0);

struct RegularizedLoop {
    MatrixLoop loop;                   // G_1 sampled off the jumps
    std::vector<Mat> limit_plus;       // extrapolated one-sided limits of G_1
    std::vector<Mat> limit_minus;
    std::vector<double> jump_defect;   // ||limit_plus - limit_minus|| per jump
};

struct RegularizeOptions {
    int grid_size = 256;
    double defect_tol = 1e-8;      // relative to the symbol scale
    double offset_start = 1e-3;    // largest arc offset of the limit ladder
    int offset_count = 12;         // geometric ladder, ratio 1/2
};

/// G_1(t) = (prod Omega_j^+)^{-1} G(t) (prod Omega_j^-), continuous at every
/// jump point; the one-sided limits are estimated by iterated Aitken
/// extrapolation along the arc and must agree within the tolerance.
RegularizedLoop regularize_transmission(const PiecewiseLoop& data, cplx z0,
                                        const RegularizeOptions& opts = {});

/// Direct evaluation of the regularized symbol at a circle point.
Mat regularized_symbol(const Regularizers& reg, const PiecewiseLoop& data, cplx t);

}  // namespace rhb
