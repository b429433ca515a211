#include "rhb/loop.hpp"

#include <algorithm>
#include <cmath>

namespace rhb {

MatrixLoop::MatrixLoop(int n, std::map<int, Mat> coeffs, int grid_size)
    : n_(n), coeffs_(std::move(coeffs)), grid_size_(grid_size) {
    if (n <= 0) throw validation_error("loop dimension must be positive");
    if (!is_power_of_two(grid_size)) throw validation_error("loop grid size must be a power of two");
    for (const auto& [j, a] : coeffs_) {
        (void)j;
        if (a.rows() != n || a.cols() != n) throw validation_error("loop coefficient has wrong shape");
    }
}

Mat MatrixLoop::coeff(int j) const {
    auto it = coeffs_.find(j);
    if (it == coeffs_.end()) return Mat::Zero(n_, n_);
    return it->second;
}

Mat MatrixLoop::evaluate(cplx z) const {
    if (z == cplx(0.0) && degree_lo() < 0)
        throw validation_error("loop has negative exponents; cannot evaluate at z = 0");
    Mat out = Mat::Zero(n_, n_);
    for (const auto& [j, a] : coeffs_) out += a * std::pow(z, j);
    return out;
}

std::vector<Mat> MatrixLoop::sample(const UnitCircleGrid& grid) const {
    std::vector<Mat> out;
    out.reserve(static_cast<size_t>(grid.size()));
    for (int k = 0; k < grid.size(); ++k) out.push_back(evaluate(grid.node(k)));
    return out;
}

double MatrixLoop::sup_norm() const {
    UnitCircleGrid grid(grid_size_);
    double m = 0.0;
    for (int k = 0; k < grid.size(); ++k) m = std::max(m, evaluate(grid.node(k)).norm());
    return m;
}

MatrixLoop MatrixLoop::identity(int n, int grid_size) {
    return MatrixLoop(n, {{0, Mat::Identity(n, n)}}, grid_size);
}

MatrixLoop MatrixLoop::diagonal_power(const std::vector<int>& exponents, int grid_size) {
    const int n = static_cast<int>(exponents.size());
    std::map<int, Mat> coeffs;
    for (int i = 0; i < n; ++i) {
        auto& a = coeffs.try_emplace(exponents[static_cast<size_t>(i)], Mat::Zero(n, n)).first->second;
        a(i, i) = 1.0;
    }
    int span = 0;
    for (int e : exponents) span = std::max(span, std::abs(e));
    while (grid_size < 4 * span + 4) grid_size *= 2;
    return MatrixLoop(n, std::move(coeffs), grid_size);
}

MatrixLoop loop_from_samples(const std::vector<Mat>& samples, double tail_tolerance) {
    LoopSampleOptions opt;
    opt.tail_tolerance = tail_tolerance;
    return loop_from_samples(samples, opt);
}

MatrixLoop loop_from_samples(const std::vector<Mat>& samples, const LoopSampleOptions& opt) {
    const int N = static_cast<int>(samples.size());
    if (!is_power_of_two(N)) throw validation_error("sample count must be a power of two");
    const int n = static_cast<int>(samples.front().rows());
    double scale = 0.0;
    for (const auto& s : samples) {
        if (s.rows() != n || s.cols() != n) throw validation_error("inconsistent sample shapes");
        scale = std::max(scale, s.norm());
        if (std::abs(s.determinant()) < opt.det_floor)
            throw validation_error("symbol degenerate on L: sample determinant below floor");
    }
    const double tol = opt.tail_tolerance * std::max(scale, 1e-300);

    // entrywise DFT; exponent j corresponds to bin j mod N, folded into [-N/2, N/2)
    std::vector<Mat> bins(static_cast<size_t>(N), Mat::Zero(n, n));
    std::vector<cplx> work(static_cast<size_t>(N));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            for (int k = 0; k < N; ++k) work[static_cast<size_t>(k)] = samples[static_cast<size_t>(k)](r, c);
            fft(work);
            for (int m = 0; m < N; ++m)
                bins[static_cast<size_t>(m)](r, c) = work[static_cast<size_t>(m)] / static_cast<double>(N);
        }

    auto bin_norm = [&](int m) { return bins[static_cast<size_t>(((m % N) + N) % N)].norm(); };
    if (opt.enforce_tail) {
        if (bin_norm(N / 2) > tol || bin_norm(N / 2 - 1) > tol)
            throw numerical_error("tail energy above tolerance at maximal retained degree; increase the grid");
    }

    std::map<int, Mat> coeffs;
    for (int m = 0; m < N; ++m) {
        int j = (m < N / 2) ? m : m - N;
        if (bins[static_cast<size_t>(m)].norm() > tol) coeffs[j] = bins[static_cast<size_t>(m)];
    }
    if (coeffs.empty()) coeffs[0] = Mat::Zero(n, n);
    return MatrixLoop(n, std::move(coeffs), N);
}

int global_index(const MatrixLoop& loop) {
    UnitCircleGrid grid(loop.grid_size());
    cplx prev = loop.evaluate(grid.node(0)).determinant();
    if (std::abs(prev) < 1e-14) throw validation_error("symbol degenerate on L");
    double total = 0.0;
    for (int k = 1; k <= grid.size(); ++k) {
        cplx cur = loop.evaluate(grid.node(k % grid.size())).determinant();
        if (std::abs(cur) < 1e-14) throw validation_error("symbol degenerate on L");
        total += std::arg(cur / prev);
        prev = cur;
    }
    double winding = total / (2.0 * pi);
    double rounded = std::round(winding);
    if (std::abs(winding - rounded) > 1e-6)
        throw numerical_error("determinant argument increment is not an integer multiple of 2*pi; refine the grid");
    return static_cast<int>(rounded);
}

namespace {

int common_grid(const MatrixLoop& f, const MatrixLoop& g, int requested) {
    int N = std::max({requested, f.grid_size(), g.grid_size()});
    int span = std::max(f.degree_hi() - f.degree_lo(), g.degree_hi() - g.degree_lo());
    while (N < 4 * span + 4) N *= 2;
    return N;
}

}  // namespace

MatrixLoop multiply(const MatrixLoop& f, const MatrixLoop& g, int grid_size) {
    if (f.size() != g.size()) throw validation_error("loop dimensions differ");
    UnitCircleGrid grid(common_grid(f, g, grid_size));
    std::vector<Mat> samples;
    samples.reserve(static_cast<size_t>(grid.size()));
    for (int k = 0; k < grid.size(); ++k)
        samples.push_back(f.evaluate(grid.node(k)) * g.evaluate(grid.node(k)));
    LoopSampleOptions opt;
    opt.tail_tolerance = 1e-12;
    opt.enforce_tail = false;  // exact band sum fits by construction of the grid
    return loop_from_samples(samples, opt);
}

MatrixLoop inverse(const MatrixLoop& f, int grid_size) {
    int N = std::max(grid_size, f.grid_size());
    UnitCircleGrid grid(N);
    std::vector<Mat> samples;
    samples.reserve(static_cast<size_t>(grid.size()));
    for (int k = 0; k < grid.size(); ++k) samples.push_back(f.evaluate(grid.node(k)).inverse());
    LoopSampleOptions opt;
    opt.tail_tolerance = 1e-12;
    opt.enforce_tail = false;
    return loop_from_samples(samples, opt);
}

PiecewiseLoop::PiecewiseLoop(std::vector<cplx> jump_points, std::vector<MatrixLoop> pieces)
    : jumps_(std::move(jump_points)), pieces_(std::move(pieces)) {
    if (jumps_.empty()) {
        // continuous loop carried in the piecewise container
        if (pieces_.size() != 1) throw validation_error("a loop without jumps has exactly one piece");
        return;
    }
    if (jumps_.size() != pieces_.size())
        throw validation_error("piecewise loop needs one piece per arc");
    for (const auto& s : jumps_)
        if (std::abs(std::abs(s) - 1.0) > 1e-12)
            throw validation_error("jump points must lie on the unit circle");
    jump_args_.resize(jumps_.size());
    for (size_t j = 0; j < jumps_.size(); ++j) {
        double a = std::arg(jumps_[j]);
        if (a < 0) a += 2.0 * pi;
        jump_args_[j] = a;
    }
    for (size_t j = 1; j < jump_args_.size(); ++j)
        if (jump_args_[j] <= jump_args_[j - 1] + 1e-12)
            throw validation_error("jump points must have strictly increasing argument");
    for (size_t j = 0; j < jumps_.size(); ++j) {
        Mat gp = limit_plus(static_cast<int>(j));
        Mat gm = limit_minus(static_cast<int>(j));
        if (std::abs(gp.determinant()) < 1e-12 || std::abs(gm.determinant()) < 1e-12)
            throw validation_error("one-sided limit at a jump point is not invertible");
    }
}

Mat PiecewiseLoop::limit_plus(int j) const {
    return pieces_[static_cast<size_t>(j)].evaluate(jumps_[static_cast<size_t>(j)]);
}

Mat PiecewiseLoop::limit_minus(int j) const {
    size_t prev = (static_cast<size_t>(j) + jumps_.size() - 1) % jumps_.size();
    return pieces_[prev].evaluate(jumps_[static_cast<size_t>(j)]);
}

int PiecewiseLoop::piece_index(double theta) const {
    if (jumps_.empty()) return 0;
    double a = std::fmod(theta, 2.0 * pi);
    if (a < 0) a += 2.0 * pi;
    // arc j covers [arg s_j, arg s_{j+1})
    int last = static_cast<int>(jump_args_.size()) - 1;
    if (a < jump_args_.front()) return last;  // wrap-around arc
    for (int j = last; j >= 0; --j)
        if (a >= jump_args_[static_cast<size_t>(j)]) return j;
    return last;
}

Mat PiecewiseLoop::evaluate(cplx t) const {
    double a = std::arg(t);
    for (double ja : jump_args_) {
        double d = std::abs(std::arg(t * std::polar(1.0, -ja)));
        if (d < 1e-13) throw validation_error("evaluation at a jump point is undefined");
    }
    return pieces_[static_cast<size_t>(piece_index(a))].evaluate(t / std::abs(t));
}

}  // namespace rhb
