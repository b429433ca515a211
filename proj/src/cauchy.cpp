#include "rhb/cauchy.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace rhb {

namespace {

void check_grid(const Density& d) {
    if (!is_power_of_two(d.grid_size())) throw validation_error("density sample count must be a power of two");
}

/// Spectral derivative d phi / dt at every node, entrywise.
std::vector<Mat> derivative_at_nodes(const Density& d) {
    const int N = d.grid_size();
    UnitCircleGrid grid(N);
    const int R = d.rows(), C = d.cols();
    std::vector<Mat> out(static_cast<size_t>(N), Mat::Zero(R, C));
    std::vector<cplx> work(static_cast<size_t>(N));
    for (int r = 0; r < R; ++r)
        for (int c = 0; c < C; ++c) {
            for (int k = 0; k < N; ++k) work[static_cast<size_t>(k)] = d.samples[static_cast<size_t>(k)](r, c);
            fft(work);
            for (int m = 0; m < N; ++m) {
                int mv = (m < N / 2) ? m : m - N;
                work[static_cast<size_t>(m)] *= static_cast<double>(mv) / static_cast<double>(N);
            }
            ifft(work);
            // ifft applied after manual 1/N: undo the extra factor
            for (int k = 0; k < N; ++k)
                out[static_cast<size_t>(k)](r, c) =
                    work[static_cast<size_t>(k)] * static_cast<double>(N) / grid.node(k);
        }
    return out;
}

Mat pv_at_node(const Density& d, const UnitCircleGrid& grid, const std::vector<Mat>& deriv, int k) {
    const int N = d.grid_size();
    const cplx tk = grid.node(k);
    const Mat& phik = d.samples[static_cast<size_t>(k)];
    Mat acc = tk * deriv[static_cast<size_t>(k)];
    for (int j = 0; j < N; ++j) {
        if (j == k) continue;
        const cplx tj = grid.node(j);
        acc += (d.samples[static_cast<size_t>(j)] - phik) * (tj / (tj - tk));
    }
    return acc / static_cast<double>(N) + 0.5 * phik;
}

}  // namespace

Mat cauchy_offcurve(const Density& density, cplx z, double circle_cutoff) {
    check_grid(density);
    if (std::abs(std::abs(z) - 1.0) < circle_cutoff)
        throw validation_error("evaluation point too close to the circle; use boundary values");
    const int N = density.grid_size();
    UnitCircleGrid grid(N);
    Mat acc = Mat::Zero(density.rows(), density.cols());
    for (int k = 0; k < N; ++k) {
        cplx tk = grid.node(k);
        acc += density.samples[static_cast<size_t>(k)] * (tk / (tk - z));
    }
    return acc / static_cast<double>(N);
}

Mat principal_value(const Density& density, int node_index) {
    check_grid(density);
    UnitCircleGrid grid(density.grid_size());
    auto deriv = derivative_at_nodes(density);
    return pv_at_node(density, grid, deriv, node_index);
}

std::vector<Mat> principal_value_all(const Density& density) {
    check_grid(density);
    const int N = density.grid_size();
    UnitCircleGrid grid(N);
    auto deriv = derivative_at_nodes(density);
    std::vector<Mat> out;
    out.reserve(static_cast<size_t>(N));
    for (int k = 0; k < N; ++k) out.push_back(pv_at_node(density, grid, deriv, k));
    return out;
}

BoundaryTraces plemelj_boundary(const Density& density) {
    auto pv = principal_value_all(density);
    BoundaryTraces tr;
    tr.plus.reserve(pv.size());
    tr.minus.reserve(pv.size());
    for (size_t k = 0; k < pv.size(); ++k) {
        tr.plus.push_back(pv[k] + 0.5 * density.samples[k]);
        tr.minus.push_back(pv[k] - 0.5 * density.samples[k]);
    }
    return tr;
}

Mat pv_matrix(const UnitCircleGrid& grid) {
    const int N = grid.size();
    // derivative kernel g_d = (1/N) sum_m mval(m) omega^{m d}
    std::vector<cplx> g(static_cast<size_t>(N));
    for (int m = 0; m < N; ++m)
        g[static_cast<size_t>(m)] = static_cast<double>((m < N / 2) ? m : m - N);
    ifft(g);
    Mat M(N, N);
    for (int k = 0; k < N; ++k) {
        const cplx tk = grid.node(k);
        cplx diag = 0.0;
        for (int j = 0; j < N; ++j) {
            if (j == k) continue;
            const cplx tj = grid.node(j);
            const cplx base = tj / (tj - tk);
            // D_kj = g[(k-j) mod N] / t_k
            const cplx dkj = g[static_cast<size_t>(((k - j) % N + N) % N)] / tk;
            M(k, j) = (base + tk * dkj) / static_cast<double>(N);
            diag -= base;
        }
        const cplx dkk = g[0] / tk;
        M(k, k) = (diag + tk * dkk) / static_cast<double>(N) + 0.5;
    }
    return M;
}

TransmissionSystem assemble_transmission_system(const MatrixLoop& G,
                                                const std::vector<Vec>& gamma_coeffs) {
    const int n = G.size();
    const int N = G.grid_size();
    UnitCircleGrid grid(N);
    Mat M = pv_matrix(grid);
    TransmissionSystem sys;
    sys.n = n;
    sys.grid = N;
    sys.op = Mat::Zero(n * N, n * N);
    sys.rhs = Vec::Zero(n * N);
    const Mat I = Mat::Identity(n, n);
    for (int k = 0; k < N; ++k) {
        const Mat Gk = G.evaluate(grid.node(k));
        const Mat A = I + Gk;
        const Mat B = I - Gk;
        for (int j = 0; j < N; ++j) {
            Mat block = 2.0 * B * M(k, j);
            if (j == k) block += A;
            sys.op.block(k * n, j * n, n, n) = block;
        }
        Vec gv = Vec::Zero(n);
        cplx zq = 1.0;
        for (const auto& gq : gamma_coeffs) {
            gv += gq * zq;
            zq *= grid.node(k);
        }
        sys.rhs.segment(k * n, n) = (Gk - I) * gv;
    }
    return sys;
}

Vec PiecewiseHolomorphic::evaluate(cplx z, double circle_cutoff) const {
    Mat c = cauchy_offcurve(density, z, circle_cutoff);
    Vec out = c.col(0);
    cplx zq = 1.0;
    for (const auto& gq : gamma) {
        out += gq * zq;
        zq *= z;
    }
    return out;
}

std::pair<std::vector<Vec>, std::vector<Vec>> PiecewiseHolomorphic::boundary_traces() const {
    auto tr = plemelj_boundary(density);
    const int N = density.grid_size();
    UnitCircleGrid grid(N);
    std::vector<Vec> plus, minus;
    plus.reserve(static_cast<size_t>(N));
    minus.reserve(static_cast<size_t>(N));
    for (int k = 0; k < N; ++k) {
        Vec gv = Vec::Zero(density.rows());
        cplx zq = 1.0;
        for (const auto& gq : gamma) {
            gv += gq * zq;
            zq *= grid.node(k);
        }
        plus.push_back(tr.plus[static_cast<size_t>(k)].col(0) + gv);
        minus.push_back(tr.minus[static_cast<size_t>(k)].col(0) + gv);
    }
    return {plus, minus};
}

std::vector<PiecewiseHolomorphic> solve_rhtp(const MatrixLoop& G, int pole_order,
                                             const RhtpOptions& opts) {
    if (pole_order < 0) throw validation_error("pole order at infinity must be nonnegative");
    const int n = G.size();
    const int N = G.grid_size();
    UnitCircleGrid grid(N);
    const int n_phi = n * N;
    const int n_gam = n * (pole_order + 1);

    TransmissionSystem base = assemble_transmission_system(G, {});
    Mat T(n_phi, n_phi + n_gam);
    T.leftCols(n_phi) = base.op;
    // gamma columns: residual contribution 2(1-G(t_k)) t_k^q e_a
    const Mat I = Mat::Identity(n, n);
    for (int k = 0; k < N; ++k) {
        const Mat Bk2 = 2.0 * (I - G.evaluate(grid.node(k)));
        cplx zq = 1.0;
        for (int q = 0; q <= pole_order; ++q) {
            T.block(k * n, n_phi + q * n, n, n) = Bk2 * zq;
            zq *= grid.node(k);
        }
    }

    Eigen::BDCSVD<Mat> svd(T, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double top = sv.size() ? sv(0) : 0.0;
    const double cut = opts.rank_cutoff * std::max(top, 1e-300);
    int null_dim = 0;
    for (int i = 0; i < sv.size(); ++i) {
        double s = sv(i);
        if (s < cut) ++null_dim;
        else if (s < cut * opts.ambiguity_band && s > cut / opts.ambiguity_band)
            throw numerical_error("singular values cluster at the rank cutoff; refine the grid");
    }
    null_dim += static_cast<int>(T.cols() - sv.size());  // columns beyond the thin rank

    std::vector<PiecewiseHolomorphic> basis;
    const Mat& V = svd.matrixV();
    for (int b = 0; b < null_dim; ++b) {
        Vec v = V.col(V.cols() - 1 - b);
        PiecewiseHolomorphic sol;
        sol.density.samples.assign(static_cast<size_t>(N), Mat::Zero(n, 1));
        for (int k = 0; k < N; ++k)
            sol.density.samples[static_cast<size_t>(k)] = v.segment(k * n, n);
        for (int q = 0; q <= pole_order; ++q)
            sol.gamma.push_back(v.segment(n_phi + q * n, n));
        basis.push_back(std::move(sol));
    }

    // transmission defect per basis element
    double scale = 0.0;
    for (int k = 0; k < N; ++k) scale = std::max(scale, G.evaluate(grid.node(k)).norm());
    for (const auto& sol : basis) {
        auto [plus, minus] = sol.boundary_traces();
        double defect = 0.0;
        for (int k = 0; k < N; ++k) {
            Vec r = plus[static_cast<size_t>(k)] - G.evaluate(grid.node(k)) * minus[static_cast<size_t>(k)];
            defect = std::max(defect, r.cwiseAbs().maxCoeff());
        }
        if (defect > opts.residual_tol * std::max(1.0, scale))
            throw numerical_error("null vector violates the transmission condition; refine the grid");
    }
    return basis;
}

}  // namespace rhb
