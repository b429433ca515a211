#pragma once

#include <vector>

#include "rhb/types.hpp"

namespace rhb {

/// Matrix exponential (scaling and squaring).
Mat matrix_exp(const Mat& A);

/// Gamma = (1/2 pi i) ln G with every eigenvalue mu of Gamma normalized to
/// 0 <= Re mu < 1, so exp(2 pi i Gamma) = G.  Computed by unitary
/// triangularization, per-cluster branch choice, and the triangular block
/// recurrence; equal eigenvalues share a branch.
Mat normalized_log(const Mat& G);

/// exp(Gamma * log w) with the scalar log branch cut along the ray
/// arg = cut_angle; the returned argument lies in (cut_angle - 2 pi, cut_angle).
Mat matrix_power(cplx w, const Mat& gamma, double cut_angle);

/// ((z - s)/(z - z0))^Gamma with the principal logarithm of the ratio; the
/// induced branch cut in z is exactly the segment from z0 to s.
Mat ratio_power(cplx z, cplx s, cplx z0, const Mat& gamma);

/// Generalized eigenstructure of a matrix, one entry per eigenvalue cluster.
struct SpectralBlock {
    cplx eigenvalue;   // cluster representative
    int multiplicity;
    Mat projector;     // spectral projector onto the generalized eigenspace
    Mat nilpotent;     // (E - eigenvalue) * projector
};

std::vector<SpectralBlock> spectral_blocks(const Mat& E, double cluster_tol = 1e-5);

}  // namespace rhb
