#pragma once

#include <map>
#include <optional>
#include <vector>

#include "rhb/grid.hpp"
#include "rhb/types.hpp"

namespace rhb {

/// Invertible matrix-valued function on the unit circle stored as a finitely
/// supported Laurent series, G(t) = sum_j A_j t^j.
class MatrixLoop {
public:
    MatrixLoop(int n, std::map<int, Mat> coeffs, int grid_size);

    int size() const { return n_; }
    int grid_size() const { return grid_size_; }
    const std::map<int, Mat>& coeffs() const { return coeffs_; }

    /// Lowest stored exponent (0 for the empty loop).
    int degree_lo() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }
    /// Highest stored exponent.
    int degree_hi() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

    /// Coefficient of t^j (zero matrix when absent).
    Mat coeff(int j) const;

    /// sum_j A_j z^j over the stored support.  z = 0 is rejected when
    /// negative exponents are present.
    Mat evaluate(cplx z) const;

    std::vector<Mat> sample(const UnitCircleGrid& grid) const;

    /// Largest Frobenius norm over sampled nodes of the default grid.
    double sup_norm() const;

    static MatrixLoop identity(int n, int grid_size = 64);
    /// Diagonal monomial loop d_K(t) = diag(t^{k_1}, ..., t^{k_n}).
    static MatrixLoop diagonal_power(const std::vector<int>& exponents, int grid_size = 64);

private:
    int n_;
    std::map<int, Mat> coeffs_;
    int grid_size_;
};

struct LoopSampleOptions {
    double tail_tolerance = 1e-10;
    double det_floor = 1e-12;    // invertibility proxy on the grid
    bool enforce_tail = true;    // throw when the band edge carries energy
};

/// Fourier analysis of grid samples into a truncated Laurent series.
/// Sample count must be a power of two and every sample invertible.
MatrixLoop loop_from_samples(const std::vector<Mat>& samples, double tail_tolerance);
MatrixLoop loop_from_samples(const std::vector<Mat>& samples, const LoopSampleOptions& opt);

/// Winding number of det G around 0, summed from argument increments over the
/// grid.  Fails when the accumulated argument is not within 1e-6 of an
/// integer multiple of 2*pi.
int global_index(const MatrixLoop& loop);

/// Pointwise product sampled on a common grid of size N.
MatrixLoop multiply(const MatrixLoop& f, const MatrixLoop& g, int grid_size = 0);

/// Pointwise inverse sampled on a grid of size N (tail check disabled; the
/// inverse of a Laurent polynomial is generally a full series).
MatrixLoop inverse(const MatrixLoop& f, int grid_size = 0);

/// Matrix loop on the circle that is smooth except for finitely many jump
/// points; piece j is the arc from jump j to jump j+1 (counterclockwise).
class PiecewiseLoop {
public:
    PiecewiseLoop(std::vector<cplx> jump_points, std::vector<MatrixLoop> pieces);

    int size() const { return pieces_.front().size(); }
    int jump_count() const { return static_cast<int>(jumps_.size()); }
    const std::vector<cplx>& jump_points() const { return jumps_; }
    const std::vector<MatrixLoop>& pieces() const { return pieces_; }

    /// One-sided limits at jump j along the circle.
    Mat limit_plus(int j) const;   // t -> s_j + 0 (counterclockwise side)
    Mat limit_minus(int j) const;  // t -> s_j - 0

    /// Evaluate at a circle point (must not be a jump point).
    Mat evaluate(cplx t) const;

    /// Index of the arc containing angle theta.
    int piece_index(double theta) const;

private:
    std::vector<cplx> jumps_;          // ordered by increasing argument in [0, 2pi)
    std::vector<double> jump_args_;
    std::vector<MatrixLoop> pieces_;   // pieces_[j] lives on arc (s_j, s_{j+1})
};

}  // namespace rhb
