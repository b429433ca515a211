#include "rhb/matfun.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace rhb {

Mat matrix_exp(const Mat& A) { return A.exp(); }

namespace {

struct ClusteredSchur {
    Mat T;  // upper triangular, clusters contiguous
    Mat Q;  // unitary, input = Q T Q^H
    std::vector<int> starts;  // block start offsets
    std::vector<int> sizes;
};

/// Unitary 2x2 rotation swapping adjacent diagonal entries of a triangular
/// matrix; first column is the eigenvector of [[a, b], [0, d]] for d.
Eigen::Matrix2cd swap_rotation(cplx a, cplx b, cplx d) {
    cplx x0 = b, x1 = d - a;
    double r = std::sqrt(std::norm(x0) + std::norm(x1));
    Eigen::Matrix2cd g;
    g << x0 / r, -std::conj(x1) / r, x1 / r, std::conj(x0) / r;
    return g;
}

ClusteredSchur clustered_schur(const Mat& A, double cluster_tol) {
    const int n = static_cast<int>(A.rows());
    Eigen::ComplexSchur<Mat> schur(A, true);
    if (schur.info() != Eigen::Success) throw numerical_error("Schur decomposition failed");
    Mat T = schur.matrixT();
    Mat Q = schur.matrixU();

    double scale = 1.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(T(i, i)));
    const double tol = cluster_tol * scale;

    // transitive clustering of the diagonal
    std::vector<int> cluster(static_cast<size_t>(n));
    std::iota(cluster.begin(), cluster.end(), 0);
    std::function<int(int)> find = [&](int i) {
        while (cluster[static_cast<size_t>(i)] != i) i = cluster[static_cast<size_t>(i)];
        return i;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(T(i, i) - T(j, j)) <= tol)
                cluster[static_cast<size_t>(find(j))] = find(i);
    std::vector<int> label(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) label[static_cast<size_t>(i)] = find(i);

    // bubble equal labels together, ordered by first occurrence
    std::vector<int> order;  // desired label order
    for (int i = 0; i < n; ++i)
        if (std::find(order.begin(), order.end(), label[static_cast<size_t>(i)]) == order.end())
            order.push_back(label[static_cast<size_t>(i)]);
    auto rank_of = [&](int lab) {
        return static_cast<int>(std::find(order.begin(), order.end(), lab) - order.begin());
    };
    bool moved = true;
    while (moved) {
        moved = false;
        for (int i = 0; i + 1 < n; ++i) {
            if (rank_of(label[static_cast<size_t>(i)]) > rank_of(label[static_cast<size_t>(i + 1)])) {
                Eigen::Matrix2cd g = swap_rotation(T(i, i), T(i, i + 1), T(i + 1, i + 1));
                T.middleRows(i, 2) = g.adjoint() * T.middleRows(i, 2);
                T.middleCols(i, 2) = T.middleCols(i, 2) * g;
                Q.middleCols(i, 2) = Q.middleCols(i, 2) * g;
                T(i + 1, i) = 0.0;
                std::swap(label[static_cast<size_t>(i)], label[static_cast<size_t>(i + 1)]);
                moved = true;
            }
        }
    }

    ClusteredSchur out;
    out.T = std::move(T);
    out.Q = std::move(Q);
    int i = 0;
    while (i < n) {
        int j = i;
        while (j < n && label[static_cast<size_t>(j)] == label[static_cast<size_t>(i)]) ++j;
        out.starts.push_back(i);
        out.sizes.push_back(j - i);
        i = j;
    }
    return out;
}

/// Block Parlett recurrence for a primary function given per-block atomic
/// values.  atomic(block_index, triangular_block) must return f(block).
Mat parlett_function(const ClusteredSchur& cs,
                     const std::function<Mat(int, const Mat&)>& atomic) {
    const int nb = static_cast<int>(cs.starts.size());
    const int n = static_cast<int>(cs.T.rows());
    Mat F = Mat::Zero(n, n);
    auto blk = [&](const Mat& m, int bi, int bj) -> Mat {
        return m.block(cs.starts[static_cast<size_t>(bi)], cs.starts[static_cast<size_t>(bj)],
                       cs.sizes[static_cast<size_t>(bi)], cs.sizes[static_cast<size_t>(bj)]);
    };
    for (int b = 0; b < nb; ++b) {
        Mat Tb = blk(cs.T, b, b);
        Mat Fb = atomic(b, Tb);
        F.block(cs.starts[static_cast<size_t>(b)], cs.starts[static_cast<size_t>(b)],
                cs.sizes[static_cast<size_t>(b)], cs.sizes[static_cast<size_t>(b)]) = Fb;
    }
    for (int d = 1; d < nb; ++d) {
        for (int i = 0; i + d < nb; ++i) {
            int j = i + d;
            Mat rhs = blk(F, i, i) * blk(cs.T, i, j) - blk(cs.T, i, j) * blk(F, j, j);
            for (int k = i + 1; k < j; ++k)
                rhs += blk(F, i, k) * blk(cs.T, k, j) - blk(cs.T, i, k) * blk(F, k, j);
            // Sylvester T_ii X - X T_jj = rhs via Kronecker form
            const int p = cs.sizes[static_cast<size_t>(i)], q = cs.sizes[static_cast<size_t>(j)];
            Mat Tii = blk(cs.T, i, i), Tjj = blk(cs.T, j, j);
            Mat Kr = Mat::Zero(p * q, p * q);
            for (int c = 0; c < q; ++c) Kr.block(c * p, c * p, p, p) = Tii;
            for (int c = 0; c < q; ++c)
                for (int r = 0; r < q; ++r)
                    Kr.block(c * p, r * p, p, p) -= Tjj(r, c) * Mat::Identity(p, p);
            Vec v(p * q);
            for (int c = 0; c < q; ++c) v.segment(c * p, p) = rhs.col(c);
            Vec x = Kr.partialPivLu().solve(v);
            Mat X(p, q);
            for (int c = 0; c < q; ++c) X.col(c) = x.segment(c * p, p);
            F.block(cs.starts[static_cast<size_t>(i)], cs.starts[static_cast<size_t>(j)], p, q) = X;
        }
    }
    return F;
}

double wrap_to_window(double arg) {
    // wrap into [0, 2 pi)
    double a = std::fmod(arg, 2.0 * pi);
    if (a < 0) a += 2.0 * pi;
    return a;
}

/// Log of an upper triangular block with nearly equal diagonal, on the branch
/// with argument theta: ln|mean| + i theta + log1p series of the deviation.
Mat atomic_log(const Mat& Tb, double theta) {
    const int m = static_cast<int>(Tb.rows());
    cplx mean = 0.0;
    for (int i = 0; i < m; ++i) mean += Tb(i, i);
    mean /= static_cast<double>(m);
    Mat X = Tb / mean - Mat::Identity(m, m);
    Mat term = X;
    Mat S = Mat::Zero(m, m);
    for (int k = 1; k <= 400; ++k) {
        S += term * (k % 2 == 1 ? 1.0 : -1.0) / static_cast<double>(k);
        term = term * X;
        if (term.norm() < 1e-18 * (1.0 + S.norm())) break;
        if (k == 400) throw numerical_error("atomic logarithm series did not converge");
    }
    cplx lead = std::log(std::abs(mean)) + iu * theta;
    return lead * Mat::Identity(m, m) + S;
}

}  // namespace

Mat normalized_log(const Mat& G) {
    if (G.rows() != G.cols()) throw validation_error("normalized_log needs a square matrix");
    const int n = static_cast<int>(G.rows());
    ClusteredSchur cs = clustered_schur(G, 1e-5);
    double scale = std::max(1.0, G.norm());
    for (int i = 0; i < n; ++i)
        if (std::abs(cs.T(i, i)) < 1e-14 * scale)
            throw validation_error("matrix is singular; logarithm undefined");

    // pick a branch per cluster and reject straddles of the positive real axis
    std::vector<double> thetas(cs.starts.size());
    for (size_t b = 0; b < cs.starts.size(); ++b) {
        double lo = 1e300, hi = -1e300;
        for (int i = cs.starts[b]; i < cs.starts[b] + cs.sizes[b]; ++i) {
            double th = wrap_to_window(std::arg(cs.T(i, i)));
            lo = std::min(lo, th);
            hi = std::max(hi, th);
        }
        if (hi - lo > pi)
            throw numerical_error("clustered eigenvalues straddle the branch cut; "
                                  "normalization ill posed");
        cplx mean = 0.0;
        for (int i = cs.starts[b]; i < cs.starts[b] + cs.sizes[b]; ++i) mean += cs.T(i, i);
        thetas[b] = wrap_to_window(std::arg(mean));
    }

    Mat F = parlett_function(cs, [&](int b, const Mat& Tb) {
        return atomic_log(Tb, thetas[static_cast<size_t>(b)]);
    });
    return (cs.Q * F * cs.Q.adjoint()) / (2.0 * pi * iu);
}

Mat matrix_power(cplx w, const Mat& gamma, double cut_angle) {
    if (w == cplx(0.0)) throw validation_error("matrix power undefined at the branch point");
    double a = std::arg(w);
    // distance to the cut ray
    double d = std::abs(std::remainder(a - cut_angle, 2.0 * pi));
    if (d < 1e-12) throw validation_error("evaluation point lies on the branch cut");
    while (a >= cut_angle) a -= 2.0 * pi;
    while (a < cut_angle - 2.0 * pi) a += 2.0 * pi;
    cplx lg = std::log(std::abs(w)) + iu * a;
    return matrix_exp(gamma * lg);
}

Mat ratio_power(cplx z, cplx s, cplx z0, const Mat& gamma) {
    cplx w = (z - s) / (z - z0);
    if (w == cplx(0.0)) throw validation_error("ratio power undefined at the branch point");
    if (std::abs(w.imag()) < 1e-14 * std::abs(w) && w.real() < 0.0)
        throw validation_error("evaluation point lies on the segment branch cut");
    cplx lg = std::log(w);  // principal
    return matrix_exp(gamma * lg);
}

std::vector<SpectralBlock> spectral_blocks(const Mat& E, double cluster_tol) {
    ClusteredSchur cs = clustered_schur(E, cluster_tol);
    std::vector<SpectralBlock> out;
    for (size_t b = 0; b < cs.starts.size(); ++b) {
        Mat F = parlett_function(cs, [&](int bb, const Mat& Tb) -> Mat {
            const int m = static_cast<int>(Tb.rows());
            return bb == static_cast<int>(b) ? Mat(Mat::Identity(m, m)) : Mat(Mat::Zero(m, m));
        });
        SpectralBlock blk;
        cplx mean = 0.0;
        for (int i = cs.starts[b]; i < cs.starts[b] + cs.sizes[b]; ++i) mean += cs.T(i, i);
        blk.eigenvalue = mean / static_cast<double>(cs.sizes[b]);
        blk.multiplicity = cs.sizes[b];
        blk.projector = cs.Q * F * cs.Q.adjoint();
        blk.nilpotent = (E - blk.eigenvalue * Mat::Identity(E.rows(), E.cols())) * blk.projector;
        out.push_back(std::move(blk));
    }
    return out;
}

}  // namespace rhb
