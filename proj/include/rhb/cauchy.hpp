#pragma once

#include <vector>

#include "rhb/loop.hpp"

namespace rhb {

/// Samples of a (scalar block) density on a UnitCircleGrid.  Entries may be
/// vector- or matrix-valued; all operations act entrywise.
struct Density {
    std::vector<Mat> samples;

    int grid_size() const { return static_cast<int>(samples.size()); }
    int rows() const { return static_cast<int>(samples.front().rows()); }
    int cols() const { return static_cast<int>(samples.front().cols()); }
};

/// Trapezoid approximation of (1/2pi i) \oint phi(t)/(t - z) dt for z off the
/// circle.  Spectrally accurate for smooth densities.
Mat cauchy_offcurve(const Density& density, cplx z, double circle_cutoff = 1e-3);

/// Principal value of the Cauchy integral at grid node t_k, computed by
/// analytic subtraction: PV[phi] = PV[phi - phi(t_k)] + phi(t_k) * PV[1],
/// with PV[1] = 1/2 on the circle.  The subtracted term is a regular
/// integral whose diagonal value is t_k * phi'(t_k) (spectral derivative).
Mat principal_value(const Density& density, int node_index);

/// Principal values at every node (same arithmetic as principal_value).
std::vector<Mat> principal_value_all(const Density& density);

struct BoundaryTraces {
    std::vector<Mat> plus;   // Phi^+ = +phi/2 + PV
    std::vector<Mat> minus;  // Phi^- = -phi/2 + PV
};

/// Sokhotski-Plemelj boundary values; Phi^+ - Phi^- = phi holds exactly at
/// every node by construction.
BoundaryTraces plemelj_boundary(const Density& density);

/// Dense matrix of the scalar principal-value operator on grid samples.
Mat pv_matrix(const UnitCircleGrid& grid);

/// Discretization of the singular integral system
///   A(t0) phi(t0) + (B(t0)/pi i) PV\oint phi(t)/(t-t0) dt = F(t0)
/// with A = 1+G, B = 1-G, F = (G-1) gamma.  Unknowns are node-major:
/// phi(t_0), phi(t_1), ... each an n-vector.
struct TransmissionSystem {
    Mat op;   // nN x nN
    Vec rhs;  // nN
    int n = 0;
    int grid = 0;
};

TransmissionSystem assemble_transmission_system(const MatrixLoop& G,
                                                const std::vector<Vec>& gamma_coeffs);

/// Piecewise holomorphic vector function represented as a Cauchy integral of
/// a density plus a polynomial principal part at infinity.
struct PiecewiseHolomorphic {
    Density density;             // jump phi = Phi^+ - Phi^-
    std::vector<Vec> gamma;      // gamma(z) = sum_q gamma[q] z^q

    Vec evaluate(cplx z, double circle_cutoff = 1e-3) const;
    /// Boundary traces (Phi^+, Phi^-) on the grid.
    std::pair<std::vector<Vec>, std::vector<Vec>> boundary_traces() const;
};

struct RhtpOptions {
    double rank_cutoff = 1e-8;       // relative to the top singular value
    double residual_tol = 1e-8;      // transmission defect per unit basis vector
    double ambiguity_band = 10.0;    // singular values within this factor of the
                                     // cutoff make the rank call ambiguous
};

/// Basis of solutions of Phi^+ = G Phi^- with pole order at infinity at most
/// pole_order, from the null space of the assembled singular system.
std::vector<PiecewiseHolomorphic> solve_rhtp(const MatrixLoop& G, int pole_order,
                                             const RhtpOptions& opts = {});

}  // namespace rhb
