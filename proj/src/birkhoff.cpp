#include "rhb/birkhoff.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace rhb {

SplittingType::SplittingType(std::vector<int> k) : k_(std::move(k)) {
    if (k_.empty()) throw validation_error("splitting type must be nonempty");
    for (size_t i = 1; i < k_.size(); ++i)
        if (k_[i - 1] < k_[i]) throw validation_error("splitting type must be weakly decreasing");
}

int SplittingType::sum() const { return std::accumulate(k_.begin(), k_.end(), 0); }

namespace {

int svd_null_dim(const Mat& A, double rel_cutoff) {
    if (A.rows() == 0) return static_cast<int>(A.cols());
    Eigen::BDCSVD<Mat> svd(A);
    const auto& sv = svd.singularValues();
    const double top = sv.size() ? sv(0) : 0.0;
    if (top <= 0.0) return static_cast<int>(A.cols());
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > rel_cutoff * top) ++rank;
    return static_cast<int>(A.cols()) - rank;
}

}  // namespace

int toeplitz_kernel_dim(const MatrixLoop& G, int shift, int truncation, double rank_cutoff) {
    const int n = G.size();
    const int M = truncation;
    // unknown Phi^- = sum_{j=-M..0} b_j z^j; constraint: negative-exponent part
    // of t^{-shift} G Phi^- vanishes.
    const int lo = G.degree_lo() - shift;
    const int e_lo = lo - M;
    const int e_hi = -1;
    const int rows = std::max(0, e_hi - e_lo + 1) * n;
    const int cols = (M + 1) * n;
    Mat A = Mat::Zero(rows, cols);
    for (int e = e_lo; e <= e_hi; ++e) {
        for (int j = -M; j <= 0; ++j) {
            const Mat block = G.coeff(e - j + shift);
            if (block.isZero(0.0)) continue;
            A.block((e - e_lo) * n, (j + M) * n, n, n) = block;
        }
    }
    return svd_null_dim(A, rank_cutoff);
}

SplittingType partial_indices(const MatrixLoop& G, const PartialIndexOptions& opts) {
    const int n = G.size();
    const int kappa = global_index(G);
    const int span = G.degree_hi() - G.degree_lo();
    int M = opts.truncation > 0 ? opts.truncation : 4 * span + 16;

    for (int attempt = 0; attempt <= opts.max_doublings; ++attempt, M *= 2) {
        int m_lo = G.degree_lo() - 1;
        int m_hi = G.degree_hi() + 1;
        std::vector<int> dims;  // dims[t] = dim(m_lo + t), for m in [m_lo, m_hi + 1]
        auto dim_at = [&](int m) { return toeplitz_kernel_dim(G, m, M, opts.rank_cutoff); };
        for (int m = m_lo; m <= m_hi + 1; ++m) dims.push_back(dim_at(m));

        // extend until the counts saturate at both ends
        auto count = [&](size_t t) { return dims[t] - dims[t + 1]; };
        int guard = 0;
        while (count(0) < n && guard++ < 8) {
            --m_lo;
            dims.insert(dims.begin(), dim_at(m_lo));
        }
        guard = 0;
        while (dims[dims.size() - 2] > 0 && guard++ < 8) {
            ++m_hi;
            dims.push_back(dim_at(m_hi + 1));
        }

        bool ok = count(0) == n && dims[dims.size() - 2] == 0;
        std::vector<int> k;
        if (ok) {
            // #{i : k_i = m} = count(m) - count(m+1)
            for (int m = m_hi; m >= m_lo; --m) {
                size_t t = static_cast<size_t>(m - m_lo);
                int c_m = count(t);
                int c_m1 = (m == m_hi) ? 0 : count(t + 1);
                int eq = c_m - c_m1;
                if (eq < 0) { ok = false; break; }
                for (int r = 0; r < eq; ++r) k.push_back(m);
            }
        }
        if (ok && static_cast<int>(k.size()) == n &&
            std::accumulate(k.begin(), k.end(), 0) == kappa) {
            // the whole measured profile must match the reconstruction
            bool profile_ok = true;
            for (size_t t = 0; t < dims.size(); ++t) {
                int m = m_lo + static_cast<int>(t);
                long long expect = 0;
                for (int ki : k) expect += std::max(ki - m + 1, 0);
                if (expect != dims[t]) { profile_ok = false; break; }
            }
            if (profile_ok) return SplittingType(std::move(k));
        }
    }
    throw numerical_error("kernel dimension profile inconsistent with a weakly decreasing multiindex; "
                          "truncation too small");
}

double Factorization::residual(const MatrixLoop& G) const {
    UnitCircleGrid grid(std::max(G.grid_size(), plus.grid_size()));
    auto dk = MatrixLoop::diagonal_power(type.entries(), grid.size());
    double worst = 0.0;
    for (int k = 0; k < grid.size(); ++k) {
        cplx t = grid.node(k);
        Mat lhs = G.evaluate(t);
        Mat rhs = minus.evaluate(t) * dk.evaluate(t) * plus.evaluate(t);
        worst = std::max(worst, (lhs - rhs).norm());
    }
    return worst;
}

Factorization factorize(const MatrixLoop& G, const FactorizeOptions& opts) {
    const int n = G.size();
    SplittingType K = partial_indices(G);
    const int hi = G.degree_hi();
    const double gscale = G.sup_norm();

    int Mw = opts.plus_truncation;
    std::string last_failure = "factorization residual above tolerance";
    for (int attempt = 0; attempt <= opts.max_doublings; ++attempt, Mw *= 2) {
        // Solve columnwise for W = (f^+)^{-1}: (G w_i) must have no exponent
        // above k_i and coefficient e_i at exponent k_i; exponents below k_i
        // are free and become the tail of f^-.
        std::vector<Mat> wcoef(static_cast<size_t>(Mw + 1), Mat::Zero(n, n));
        bool solved = true;
        for (int i = 0; i < n; ++i) {
            const int ki = K.entry(i);
            const int e_lo = ki;            // normalization row at e = k_i
            const int e_hi = hi + Mw;
            const int rows = (e_hi - e_lo + 1) * n;
            const int cols = (Mw + 1) * n;
            Mat A = Mat::Zero(rows, cols);
            Vec rhs = Vec::Zero(rows);
            rhs(i) = 1.0;  // (G w_i)_{k_i} = e_i
            for (int e = e_lo; e <= e_hi; ++e)
                for (int q = 0; q <= Mw; ++q) {
                    const Mat block = G.coeff(e - q);
                    if (block.isZero(0.0)) continue;
                    A.block((e - e_lo) * n, q * n, n, n) = block;
                }
            Eigen::BDCSVD<Mat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
            Vec w = svd.solve(rhs);
            if (!w.allFinite()) { solved = false; break; }
            for (int q = 0; q <= Mw; ++q) wcoef[static_cast<size_t>(q)].col(i) = w.segment(q * n, n);
        }
        if (!solved) { last_failure = "least-squares solve for f^+ failed"; continue; }

        int N = opts.grid_size;
        while (N < 2 * Mw + 2 * std::max(std::abs(G.degree_lo()), hi) + 8) N *= 2;
        UnitCircleGrid grid(N);
        auto dk = MatrixLoop::diagonal_power(K.entries(), N);

        std::vector<Mat> f_plus_samples, f_minus_samples;
        f_plus_samples.reserve(static_cast<size_t>(N));
        f_minus_samples.reserve(static_cast<size_t>(N));
        bool invertible = true;
        for (int k = 0; k < N; ++k) {
            const cplx t = grid.node(k);
            Mat W = Mat::Zero(n, n);
            cplx tq = 1.0;
            for (int q = 0; q <= Mw; ++q) {
                W += wcoef[static_cast<size_t>(q)] * tq;
                tq *= t;
            }
            if (std::abs(W.determinant()) < 1e-13) { invertible = false; break; }
            f_plus_samples.push_back(W.inverse());
            f_minus_samples.push_back(G.evaluate(t) * W * dk.evaluate(t).inverse());
        }
        if (!invertible) { last_failure = "recovered f^+ is singular on the grid"; continue; }

        LoopSampleOptions lopt;
        lopt.tail_tolerance = 1e-13;
        lopt.enforce_tail = false;
        MatrixLoop plus_full = loop_from_samples(f_plus_samples, lopt);
        MatrixLoop minus_full = loop_from_samples(f_minus_samples, lopt);

        // analyticity checks: f^+ has no negative exponents, f^- no positive
        double plus_defect = 0.0, minus_defect = 0.0;
        std::map<int, Mat> plus_coeffs, minus_coeffs;
        for (const auto& [j, a] : plus_full.coeffs()) {
            if (j < 0) plus_defect = std::max(plus_defect, a.norm());
            else if (a.norm() > 1e-13 * std::max(1.0, gscale)) plus_coeffs[j] = a;
        }
        for (const auto& [j, a] : minus_full.coeffs()) {
            if (j > 0) minus_defect = std::max(minus_defect, a.norm());
            else if (a.norm() > 1e-13 * std::max(1.0, gscale)) minus_coeffs[j] = a;
        }
        const double tol = 1e-8 * std::max(1.0, gscale);
        if (plus_defect > tol || minus_defect > tol) {
            last_failure = "factor analyticity defect above tolerance";
            continue;
        }
        if (plus_coeffs.empty()) plus_coeffs[0] = Mat::Identity(n, n);
        if (minus_coeffs.empty()) minus_coeffs[0] = Mat::Identity(n, n);

        Factorization fact{MatrixLoop(n, std::move(minus_coeffs), N), K,
                           MatrixLoop(n, std::move(plus_coeffs), N)};
        if (fact.residual(G) <= opts.residual_tol * std::max(1.0, gscale)) return fact;
        last_failure = "factorization residual above tolerance";
    }
    throw numerical_error(last_failure + " after truncation doublings; symbol may be ill conditioned");
}

StratumInvariants stratum_invariants(const SplittingType& K) {
    StratumInvariants out;
    const auto& k = K.entries();
    for (int i = 0; i < K.rank(); ++i)
        for (int j = 0; j < K.rank(); ++j) {
            const int d = k[static_cast<size_t>(i)] - k[static_cast<size_t>(j)];
            if (d >= 0) out.dim_HK += d + 1;
            if (d > 0) out.codim += d - 1;
        }
    return out;
}

bool is_stable(const SplittingType& K) { return K.top() - K.bottom() <= 1; }

}  // namespace rhb
