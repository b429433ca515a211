#include "rhb/acceptance.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "rhb/bundle.hpp"
#include "rhb/cauchy.hpp"
#include "rhb/matfun.hpp"

namespace rhb {

namespace fixtures {

FuchsianSystem commuting_nilpotent() {
    FuchsianSystem sys;
    sys.points = {cplx(1.0), cplx(-1.0)};
    Mat a = Mat::Zero(2, 2);
    a(0, 1) = 1.0;
    sys.residues = {a, -a};
    sys.basepoint = cplx(-1.5, -1.5);
    return sys;
}

FuchsianSystem hypergeometric(double a, double b, double c) {
    FuchsianSystem sys;
    sys.points = {cplx(0.0), cplx(1.0)};
    Mat a0 = Mat::Zero(2, 2), a1 = Mat::Zero(2, 2);
    a0(1, 0) = -a * b;
    a0(1, 1) = -c;
    a1(0, 1) = 1.0;
    a1(1, 1) = c - (a + b);
    sys.residues = {a0, a1};
    sys.basepoint = cplx(-1.0, -1.2);
    sys.infinity_marked = true;
    return sys;
}

RegularSystem regular_rank3() {
    RegularSystem sys;
    sys.points = {cplx(0.0), cplx(-1.0), cplx(1.0), cplx(0.5)};
    Mat p0_1 = Mat::Zero(3, 3), p0_2 = Mat::Zero(3, 3);
    p0_2(0, 1) = 1.0;       // coefficient of z^{-2}
    p0_1(1, 1) = 1.0;       // coefficient of z^{-1}
    p0_1(2, 2) = -1.0;
    Mat c = Mat::Zero(3, 3), d = Mat::Zero(3, 3), e = Mat::Zero(3, 3);
    c(0, 1) = 1.0;
    c(1, 1) = -1.0 / 6;  c(1, 2) = 1.0 / 6;
    c(2, 1) = -1.0 / 6;  c(2, 2) = 1.0 / 6;
    d(0, 2) = 1.0;
    d(1, 1) = -0.5;      d(1, 2) = -0.5;
    d(2, 2) = 0.5;
    e(0, 1) = -1.0;      e(0, 2) = -1.0;
    e(1, 1) = -1.0 / 3;  e(1, 2) = 1.0 / 3;
    e(2, 1) = -1.0 / 3;  e(2, 2) = 1.0 / 3;
    sys.parts = {{p0_1, p0_2}, {c}, {d}, {e}};
    sys.basepoint = cplx(0.0, -2.0);
    return sys;
}

std::vector<Mat> unipotent_triple() {
    const double c1 = 1.0, c2 = 1.0;  // c1 c2 (c1 + c2) != 0
    Mat g1 = Mat::Identity(2, 2), g2 = Mat::Identity(2, 2), g3 = Mat::Identity(2, 2);
    g1(0, 1) = c1;
    g2(0, 1) = c2;
    g3(0, 1) = -c1 - c2;
    return {g1, g2, g3};
}

FuchsianSystem unipotent_triple_system() {
    auto triple = unipotent_triple();
    FuchsianSystem sys = fuchsian_from_jumps({cplx(-1.0), cplx(0.0), cplx(1.0)}, triple,
                                             cplx(-1.5, -1.5));
    return sys;
}

FuchsianSystem diag_shear_example() {
    FuchsianSystem sys;
    sys.points = {cplx(0.0)};
    Mat a = Mat::Zero(2, 2);
    a(0, 0) = 1.0;
    sys.residues = {a};
    sys.basepoint = cplx(-2.0, 0.0);
    sys.infinity_marked = true;
    return sys;
}

PiecewiseLoop scalar_two_jump() {
    Mat c0(1, 1), c1(1, 1);
    c0(0, 0) = cplx(2.0, 0.0);
    c1(0, 0) = cplx(0.5, 0.3);
    std::vector<cplx> jumps = {std::polar(1.0, 0.4), std::polar(1.0, 2.9)};
    std::vector<MatrixLoop> pieces = {MatrixLoop(1, {{0, c0}}, 64), MatrixLoop(1, {{0, c1}}, 64)};
    return PiecewiseLoop(jumps, pieces);
}

PiecewiseLoop generic_two_jump_2x2() {
    Mat c0(2, 2), c1(2, 2);
    c0 << cplx(2.0, 0.0), cplx(0.3, 0.0), cplx(0.1, 0.0), cplx(1.5, 0.0);
    c1 << cplx(1.0, 0.2), cplx(-0.2, 0.1), cplx(0.4, 0.0), cplx(2.0, 0.5);
    std::vector<cplx> jumps = {std::polar(1.0, 0.7), std::polar(1.0, 3.5)};
    std::vector<MatrixLoop> pieces = {MatrixLoop(2, {{0, c0}}, 64), MatrixLoop(2, {{0, c1}}, 64)};
    return PiecewiseLoop(jumps, pieces);
}

PiecewiseLoop unipotent_triple_piecewise() {
    auto g = unipotent_triple();
    std::vector<cplx> jumps = {std::polar(1.0, 0.5), std::polar(1.0, 2.1), std::polar(1.0, 4.0)};
    std::vector<MatrixLoop> pieces = {MatrixLoop(2, {{0, g[0]}}, 64),
                                      MatrixLoop(2, {{0, Mat(g[1] * g[0])}}, 64),
                                      MatrixLoop(2, {{0, Mat(g[2] * g[1] * g[0])}}, 64)};
    return PiecewiseLoop(jumps, pieces);
}

}  // namespace fixtures

namespace testgen {

double uniform(std::uint64_t& state) {
    // splitmix64
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

std::vector<int> random_splitting(std::uint64_t& state, int n, int lo, int hi) {
    std::vector<int> k(static_cast<size_t>(n));
    for (auto& e : k) e = lo + static_cast<int>(uniform(state) * (hi - lo + 1));
    std::sort(k.begin(), k.end(), std::greater<int>());
    return k;
}

namespace {

Mat random_matrix(std::uint64_t& state, int n) {
    Mat m(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            m(r, c) = cplx(2.0 * uniform(state) - 1.0, 2.0 * uniform(state) - 1.0);
    return m;
}

MatrixLoop bounded_factor(std::uint64_t& state, int n, int deg, double margin, bool plus) {
    std::vector<Mat> coeffs(static_cast<size_t>(deg));
    double total = 0.0;
    for (auto& c : coeffs) {
        c = random_matrix(state, n);
        total += c.norm();
    }
    const double scale = margin * (0.5 + 0.5 * uniform(state)) / std::max(total, 1e-12);
    std::map<int, Mat> laurent;
    laurent[0] = Mat::Identity(n, n);
    for (int q = 1; q <= deg; ++q)
        laurent[plus ? q : -q] = coeffs[static_cast<size_t>(q - 1)] * scale;
    return MatrixLoop(n, std::move(laurent), 64);
}

}  // namespace

MatrixLoop random_plus_factor(std::uint64_t& state, int n, int deg, double margin) {
    return bounded_factor(state, n, deg, margin, true);
}

MatrixLoop random_minus_factor(std::uint64_t& state, int n, int deg, double margin) {
    return bounded_factor(state, n, deg, margin, false);
}

namespace {

MatrixLoop random_unipotent(std::uint64_t& state, int n, int deg, bool plus) {
    // product of an upper and a lower unipotent triangular polynomial matrix;
    // determinant one, inverse again polynomial
    std::map<int, Mat> up, lo;
    up[0] = Mat::Identity(n, n);
    lo[0] = Mat::Identity(n, n);
    for (int q = 1; q <= deg; ++q) {
        Mat u = Mat::Zero(n, n), l = Mat::Zero(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                if (r < c) u(r, c) = cplx(uniform(state) - 0.5, uniform(state) - 0.5);
                if (r > c) l(r, c) = cplx(uniform(state) - 0.5, uniform(state) - 0.5);
            }
        up[plus ? q : -q] = u;
        lo[plus ? q : -q] = l;
    }
    return multiply(MatrixLoop(n, std::move(up), 64), MatrixLoop(n, std::move(lo), 64));
}

}  // namespace

MatrixLoop random_unipotent_plus(std::uint64_t& state, int n, int deg) {
    return random_unipotent(state, n, deg, true);
}

MatrixLoop random_unipotent_minus(std::uint64_t& state, int n, int deg) {
    return random_unipotent(state, n, deg, false);
}

MatrixLoop assemble_symbol(const MatrixLoop& minus, const std::vector<int>& K,
                           const MatrixLoop& plus, int grid) {
    const int n = minus.size();
    auto dk = MatrixLoop::diagonal_power(K, grid);
    UnitCircleGrid g(grid);
    std::vector<Mat> samples;
    samples.reserve(static_cast<size_t>(grid));
    for (int k = 0; k < grid; ++k) {
        const cplx t = g.node(k);
        samples.push_back(minus.evaluate(t) * dk.evaluate(t) * plus.evaluate(t));
    }
    (void)n;
    LoopSampleOptions opt;
    opt.tail_tolerance = 1e-11;
    return loop_from_samples(samples, opt);
}

}  // namespace testgen

// ---------------------------------------------------------------------------

namespace {

using clock_type = std::chrono::steady_clock;

struct Recorder {
    std::vector<CriterionResult> results;
    // symbols seen by criteria 1-3 for the index-sum identity
    std::vector<std::pair<int, int>> index_pairs;  // (sum K, global index)

    void add(int id, const std::string& name, bool passed, const std::string& detail,
             double seconds) {
        results.push_back({id, name, passed, detail, seconds});
    }
};

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

/// Independent oracle: dimension of Laurent-polynomial solutions of the
/// diagonal problem Phi^+ = d_K Phi^- with Phi^- bounded at infinity, by rank
/// of an explicit incidence system (no clipped-sum formula involved).
long long brute_force_diagonal_count(const std::vector<int>& K, int window = 9) {
    long long total = 0;
    for (int k : K) {
        // unknowns b_q, q = 0..window: Phi^- = sum b_q z^{-q};
        // constraints: coefficient of z^{k-q} in Phi^+ vanishes when k-q < 0
        int rows = 0;
        for (int q = 0; q <= window; ++q)
            if (k - q < 0) ++rows;
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(std::max(rows, 1), window + 1);
        int r = 0;
        for (int q = 0; q <= window; ++q)
            if (k - q < 0) a(r++, q) = 1.0;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
        total += (window + 1) - lu.rank();
    }
    return total;
}

std::vector<std::vector<int>> all_splittings(int n, int lo, int hi) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<size_t>(n));
    std::function<void(int, int)> rec = [&](int pos, int maxv) {
        if (pos == n) {
            out.push_back(cur);
            return;
        }
        for (int v = lo; v <= maxv; ++v) {
            cur[static_cast<size_t>(pos)] = v;
            rec(pos + 1, v);
        }
    };
    rec(0, hi);
    return out;
}

bool multiset_close(std::vector<cplx> a, std::vector<cplx> b, double tol) {
    if (a.size() != b.size()) return false;
    for (const auto& x : a) {
        double best = 1e300;
        size_t bi = 0;
        for (size_t i = 0; i < b.size(); ++i)
            if (std::abs(b[i] - x) < best) {
                best = std::abs(b[i] - x);
                bi = i;
            }
        if (best > tol) return false;
        b.erase(b.begin() + static_cast<long>(bi));
    }
    return true;
}

// criterion bodies ----------------------------------------------------------

void criterion_scalar_calibration(Recorder& rec) {
    auto t0 = clock_type::now();
    bool ok = true;
    std::string detail;
    for (int k = -5; k <= 5 && ok; ++k) {
        Mat one = Mat::Identity(1, 1);
        MatrixLoop g(1, {{k, one}}, 64);
        SplittingType K = partial_indices(g);
        const int kappa = global_index(g);
        rec.index_pairs.push_back({K.sum(), kappa});
        if (K.rank() != 1 || K.entry(0) != k || kappa != k) {
            ok = false;
            detail = "failed at k = " + std::to_string(k);
        }
    }
    const double sec = std::chrono::duration<double>(clock_type::now() - t0).count();
    if (ok && sec >= 1.0) {
        ok = false;
        detail = "runtime " + fmt(sec) + " s exceeds 1 s";
    }
    rec.add(1, "scalar calibration t^k, k in [-5, 5]", ok, ok ? "exact for all k" : detail, sec);
}

void criterion_diagonal_exactness(Recorder& rec, std::uint64_t& state) {
    auto t0 = clock_type::now();
    bool ok = true;
    std::string detail;
    for (int trial = 0; trial < 50 && ok; ++trial) {
        const int n = 1 + static_cast<int>(testgen::uniform(state) * 4);
        auto k = testgen::random_splitting(state, n, -5, 5);
        auto dk = MatrixLoop::diagonal_power(k, 64);
        SplittingType got = partial_indices(dk);
        rec.index_pairs.push_back({got.sum(), global_index(dk)});
        if (got.entries() != k) {
            ok = false;
            detail = "mismatch on trial " + std::to_string(trial);
        }
    }
    const double sec = std::chrono::duration<double>(clock_type::now() - t0).count();
    rec.add(2, "diagonal symbols d_K recovered exactly (50 random K, n <= 4)", ok,
            ok ? "all exact" : detail, sec);
}

void criterion_factorization(Recorder& rec, std::uint64_t& state) {
    auto t0 = clock_type::now();
    bool ok = true;
    std::string detail;
    double worst = 0.0;
    for (int trial = 0; trial < 100 && ok; ++trial) {
        const int n = 2 + static_cast<int>(testgen::uniform(state) * 2);
        auto k = testgen::random_splitting(state, n, -2, 2);
        auto fp = testgen::random_plus_factor(state, n, 3);
        auto fm = testgen::random_minus_factor(state, n, 3);
        MatrixLoop g = testgen::assemble_symbol(fm, k, fp);
        FactorizeOptions fo;
        fo.plus_truncation = 96;
        Factorization fact = factorize(g, fo);
        rec.index_pairs.push_back({fact.type.sum(), global_index(g)});
        if (fact.type.entries() != k) {
            ok = false;
            detail = "type mismatch on trial " + std::to_string(trial);
            break;
        }
        const double resid = fact.residual(g) / std::max(1.0, g.sup_norm());
        worst = std::max(worst, resid);
        if (resid > 1e-8) {
            ok = false;
            detail = "residual " + fmt(resid) + " on trial " + std::to_string(trial);
        }
    }
    const double sec = std::chrono::duration<double>(clock_type::now() - t0).count();
    if (ok && sec >= 60.0) {
        ok = false;
        detail = "runtime " + fmt(sec) + " s exceeds 60 s";
    }
    rec.add(3, "factorization of 100 random symbols, residual <= 1e-8 at N = 256", ok,
            ok ? "worst relative residual " + fmt(worst) : detail, sec);
}

void criterion_index_sum(Recorder& rec) {
    auto t0 = clock_type::now();
    bool ok = true;
    std::string detail;
    for (const auto& [sum, kappa] : rec.index_pairs)
        if (sum != kappa) {
            ok = false;
            detail = "sum " + std::to_string(sum) + " vs index " + std::to_string(kappa);
            break;
        }
    const double sec = std::chrono::duration<double>(clock_type::now() - t0).count();
    rec.add(4, "index sum identity kappa = sum k_i on every symbol of criteria 1-3", ok,
            ok ? std::to_string(rec.index_pairs.size()) + " symbols checked" : detail, sec);
}

void criterion_solvability_oracle(Recorder& rec, std::uint64_t& state) {
    auto t0 = clock_type::now();
    bool ok = true;
    std::string detail;
    std::vector<std::vector<int>> pool;
    for (int n = 1; n <= 3 && ok; ++n)
        for (const auto& k : all_splittings(n, -3, 3)) {
            pool.push_back(k);
            const auto sc = solvability_count(SplittingType(k));
            const long long brute = brute_force_diagonal_count(k);
            if (sc.l != brute) {
                ok = false;
                detail = "count mismatch (formula " + std::to_string(sc.l) + ", brute " +
                         std::to_string(brute) + ")";
                break;
            }
        }
    int checked = 0;
    for (int trial = 0; ok && checked < 10; ++trial) {
        const auto& k = pool[static_cast<size_t>(testgen::uniform(state) * pool.size())];
        auto dk = MatrixLoop::diagonal_power(k, 128);
        const auto sols = solve_rhtp(dk, 0);
        if (static_cast<long long>(sols.size()) != solvability_count(SplittingType(k)).l) {
            ok = false;
            detail = "solve_rhtp dimension mismatch";
        }
        ++checked;
    }
    const double sec = std::chrono::duration<double>(clock_type::now() - t0).count();
    rec.add(5, "solution-count oracle (all K, n <= 3, |k| <= 3; 10 solver subsamples)", ok,
            ok ? "formula = brute force = solver dimension" : detail, sec);
}

void criterion_round_trips(Recorder& rec) {
    auto t0 = clock_type::now();
    bool ok = true;
    std::string detail;
    for (const auto& k : all_splittings(2, -10, 10)) {
        SplittingType K(k);
        auto back = splitting_from_invariants_rank2(chern_number(K), reduced_dimension_nu(K));
        if (!(back == K)) {
            ok = false;
            detail = "rank-2 round trip failed";
            break;
        }
    }
    if (ok)
        for (const auto& k : all_splittings(3, -10, 10)) {
            SplittingType K(k);
            auto back = splitting_from_invariants_rank3(chern_number(K), weight_tau(K),
                                                        reduced_dimension_nu(K));
            if (!(back == K)) {
                ok = false;
                detail = "rank-3 round trip failed";
                break;
            }
        }
    const double sec = std::chrono::duration<double>(clock_type::now() - t0).count();
    rec.add(6, "invariant round trips, exhaustive n in {2,3}, |k| <= 10", ok,
            ok ? "identity on all types" : detail, sec);
}

void criterion_cross_formulas(Recorder& rec) {
    auto t0 = clock_type::now();
    bool ok = true;
    std::string detail;
    for (int n = 2; n <= 3 && ok; ++n)
        for (const auto& k : all_splittings(n, -10, 10)) {
            SplittingType K(k);
            const auto endo = endo_cohomology(K);
            const auto strat = stratum_invariants(K);
            if (endo.h0 != strat.dim_HK) {
                ok = false;
                detail = "h0 != dim H_K";
                break;
            }
            std::vector<Rational> mu;
            for (int e : k) mu.emplace_back(e);
            if (!(type_codimension(mu, 0) == Rational(strat.codim))) {
                ok = false;
                detail = "type codimension != stratum codimension at g = 0";
                break;
            }
        }
    const double sec = std::chrono::duration<double>(clock_type::now() - t0).count();
    rec.add(7, "cross-formula consistency (h0 = dim H_K, codim formulas agree)", ok,
            ok ? "agrees on all types of criterion 6" : detail, sec);
}

void criterion_regularization(Recorder& rec) {
    auto t0 = clock_type::now();
    bool ok = true;
    std::string detail;
    double worst = 0.0;
    const cplx z0(0.1, 0.05);
    struct Case { const char* name; PiecewiseLoop loop; };
    std::vector<Case> cases;
    cases.push_back({"scalar two-jump", fixtures::scalar_two_jump()});
    cases.push_back({"2x2 two-jump", fixtures::generic_two_jump_2x2()});
    cases.push_back({"unipotent triple three-jump", fixtures::unipotent_triple_piecewise()});
    for (const auto& c : cases) {
        try {
            auto reg = regularize_transmission(c.loop, z0);
            for (double d : reg.jump_defect) worst = std::max(worst, d);
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string(c.name) + ": " + e.what();
            break;
        }
    }
    const double sec = std::chrono::duration<double>(clock_type::now() - t0).count();
    if (ok && sec >= 10.0) {
        ok = false;
        detail = "runtime " + fmt(sec) + " s exceeds 10 s";
    }
    rec.add(8, "jump regularization: one-sided limits agree to 1e-8 on three fixtures", ok,
            ok ? "worst defect " + fmt(worst) : detail, sec);
}

struct MonodromyCache {
    MonodromyRep commuting, hyper, rank3, triple;
};

void criterion_monodromy(Recorder& rec, MonodromyCache& cache) {
    auto t0 = clock_type::now();
    bool ok = true;
    std::string detail;
    try {
        auto sys_c = fixtures::commuting_nilpotent();
        auto sys_h = fixtures::hypergeometric(0.25, 0.25, 0.5);
        auto sys_r = fixtures::regular_rank3();
        auto sys_t = fixtures::unipotent_triple_system();
        cache.commuting = monodromy(sys_c);
        cache.hyper = monodromy(sys_h);
        cache.rank3 = monodromy(sys_r);
        cache.triple = monodromy(sys_t);

        // (a) closed form for the commuting pair
        const Mat expect = matrix_exp(2.0 * pi * iu * sys_c.residues[0]);
        Mat got;
        for (size_t i = 0; i < cache.commuting.generators.size(); ++i)
            if (cache.commuting.point_index[i] == 0) got = cache.commuting.generators[i];
        if ((got - expect).norm() > 1e-8) {
            ok = false;
            detail = "commuting fixture: G != exp(2 pi i A), defect " + fmt((got - expect).norm());
        }

        // (b) generator eigenvalues at 0 for the hypergeometric fixture
        if (ok) {
            Mat g0;
            for (size_t i = 0; i < cache.hyper.generators.size(); ++i)
                if (cache.hyper.point_index[i] == 0) g0 = cache.hyper.generators[i];
            Eigen::ComplexEigenSolver<Mat> es(g0, false);
            std::vector<cplx> eig{es.eigenvalues()(0), es.eigenvalues()(1)};
            if (!multiset_close(eig, {cplx(1.0), cplx(-1.0)}, 1e-8)) {
                ok = false;
                detail = "hypergeometric eigenvalues at 0 differ from {1, -1}";
            }
        }

        // (c) cycle relation on every fixture
        if (ok)
            for (const auto* rep : {&cache.commuting, &cache.hyper, &cache.rank3, &cache.triple})
                if (rep->relation_defect > 1e-8) {
                    ok = false;
                    detail = "cycle relation defect " + fmt(rep->relation_defect);
                    break;
                }

        // (d) reducibility of the rank-3 fixture and its pole order at 0
        if (ok) {
            for (const auto& g : cache.rank3.generators) {
                Vec e1 = Vec::Zero(3);
                e1(0) = 1.0;
                if (((g - Mat::Identity(3, 3)) * e1).norm() > 1e-8) {
                    ok = false;
                    detail = "a rank-3 generator moves e1";
                    break;
                }
            }
            if (fixtures::regular_rank3().pole_order(0) != 2) {
                ok = false;
                detail = "stored pole order at 0 is not 2";
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    const double sec = std::chrono::duration<double>(clock_type::now() - t0).count();
    if (ok && sec >= 30.0) {
        ok = false;
        detail = "runtime " + fmt(sec) + " s exceeds 30 s";
    }
    rec.add(9, "monodromy engine (closed form, eigenvalues, cycle relation, reducibility)", ok,
            ok ? "all generator checks hold" : detail, sec);
}

void criterion_exponents(Recorder& rec, const MonodromyCache& cache) {
    auto t0 = clock_type::now();
    bool ok = true;
    std::string detail;
    try {
        // beta sums on the Fuchsian fixtures
        for (const auto& sys :
             {fixtures::commuting_nilpotent(), fixtures::hypergeometric(0.25, 0.25, 0.5),
              fixtures::unipotent_triple_system()}) {
            std::vector<LeveltEntry> data;
            for (size_t j = 0; j < sys.points.size(); ++j)
                data.push_back(local_exponents(sys, static_cast<int>(j)));
            if (sys.infinity_marked) data.push_back(local_exponents(sys, -1));
            auto beta = fuchs_weight_beta(data);
            if (!beta.integral || beta.beta_int != 0) {
                ok = false;
                detail = "beta sum " + fmt(beta.beta_sum) + " on a Fuchsian fixture";
                break;
            }
        }

        // beta sum on the regular rank-3 fixture: a negative integer
        std::vector<LeveltEntry> data;
        if (ok) {
            auto sys = fixtures::regular_rank3();
            data.push_back(levelt_at_regular_point(sys, 0));
            for (int j = 1; j < 4; ++j) data.push_back(local_exponents(sys, j));
            data.push_back(local_exponents(sys, -1));
            auto beta = fuchs_weight_beta(data);
            if (!beta.integral || beta.beta_int >= 0) {
                ok = false;
                detail = "rank-3 beta sum " + fmt(beta.beta_sum) + " is not a negative integer";
            }
        }

        // eigenvalue correspondence lambda = exp(2 pi i beta)
        if (ok) {
            auto check = [&](const FuchsianSystem& sys, const MonodromyRep& rep) {
                for (size_t g = 0; g < rep.generators.size() && ok; ++g) {
                    const int idx = rep.point_index[g];
                    LeveltEntry ent;
                    try {
                        ent = local_exponents(sys, idx);
                    } catch (const validation_error&) {
                        continue;  // resonant points are out of scope here
                    }
                    Eigen::ComplexEigenSolver<Mat> es(rep.generators[g], false);
                    std::vector<cplx> eig, expect;
                    for (int i = 0; i < es.eigenvalues().size(); ++i) eig.push_back(es.eigenvalues()(i));
                    for (const auto& b : ent.beta) expect.push_back(std::exp(2.0 * pi * iu * b));
                    if (!multiset_close(eig, expect, 1e-8)) {
                        ok = false;
                        detail = "exp(2 pi i beta) differs from the generator spectrum";
                    }
                }
            };
            check(fixtures::commuting_nilpotent(), cache.commuting);
            check(fixtures::hypergeometric(0.25, 0.25, 0.5), cache.hyper);
            check(fixtures::unipotent_triple_system(), cache.triple);
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    const double sec = std::chrono::duration<double>(clock_type::now() - t0).count();
    rec.add(10, "exponent calculus (beta sums and lambda = exp(2 pi i beta))", ok,
            ok ? "beta sums integral; spectra match" : detail, sec);
}

void criterion_chern(Recorder& rec, const MonodromyCache& cache) {
    auto t0 = clock_type::now();
    bool ok = true;
    std::string detail;
    try {
        for (const auto* rep : {&cache.commuting, &cache.hyper, &cache.rank3, &cache.triple})
            (void)chern_canonical(rep->generators);  // throws when not an integer
        const long long c_triple = chern_canonical(fixtures::unipotent_triple());
        if (c_triple != 0) {
            ok = false;
            detail = "unipotent triple Chern sum " + std::to_string(c_triple) + " != 0";
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    const double sec = std::chrono::duration<double>(clock_type::now() - t0).count();
    rec.add(11, "canonical Chern sums are integers; unipotent triple gives 0", ok,
            ok ? "integral on every representation fixture" : detail, sec);
}

void criterion_reduction(Recorder& rec) {
    auto t0 = clock_type::now();
    bool ok = true;
    std::string detail;
    try {
        struct Case { const char* name; FuchsianSystem sys; };
        std::vector<Case> cases;
        cases.push_back({"diag(1,0) two-point", fixtures::diag_shear_example()});
        cases.push_back({"hypergeometric", fixtures::hypergeometric(0.25, 0.25, 0.5)});
        for (const auto& c : cases) {
            auto red = reduce_exponents(c.sys);
            for (size_t j = 0; j < red.system.points.size() && ok; ++j) {
                auto ent = local_exponents(red.system, static_cast<int>(j));
                for (int f : ent.phi)
                    if (f != 0) {
                        ok = false;
                        detail = std::string(c.name) + ": finite exponent with floor != 0 remains";
                    }
            }
            if (!ok) break;
            SplittingType K = splitting_via_reduction(c.sys);
            auto back = splitting_from_invariants_rank2(chern_number(K), reduced_dimension_nu(K));
            if (!(back == K)) {
                ok = false;
                detail = std::string(c.name) + ": invariant route disagrees with the reduction route";
            }
            if (std::string(c.name) == "diag(1,0) two-point" &&
                K.entries() != std::vector<int>{1, 0}) {
                ok = false;
                detail = "diag(1,0) fixture: splitting is not (1, 0)";
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    const double sec = std::chrono::duration<double>(clock_type::now() - t0).count();
    if (ok && sec >= 30.0) {
        ok = false;
        detail = "runtime " + fmt(sec) + " s exceeds 30 s";
    }
    rec.add(12, "exponent reduction pipeline and splitting via the accumulated gauge", ok,
            ok ? "floors cleared; routes agree" : detail, sec);
}

void criterion_wronskian(Recorder& rec) {
    auto t0 = clock_type::now();
    bool ok = true;
    std::string detail;
    try {
        auto sys = fixtures::hypergeometric(0.25, 0.25, 0.5);
        auto w = scalarize(sys, 0);
        const int count = count_wronskian_zeros(w, 10.0);
        const long long bound = apparent_bound_ohtsuki(2, 0, 3);
        if (bound != 0) {
            ok = false;
            detail = "bound formula is not 0";
        } else if (count != 0) {
            ok = false;
            detail = "counted " + std::to_string(count) + " apparent singularities, expected 0";
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    const double sec = std::chrono::duration<double>(clock_type::now() - t0).count();
    rec.add(13, "apparent singularity count matches the bound on the hypergeometric fixture", ok,
            ok ? "count 0 = bound 0" : detail, sec);
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
    Recorder rec;
    std::uint64_t state = opts.seed;
    MonodromyCache cache;

    criterion_scalar_calibration(rec);
    if (!opts.fail_fast || rec.results.back().passed) criterion_diagonal_exactness(rec, state);
    if (!opts.fail_fast || rec.results.back().passed) criterion_factorization(rec, state);
    if (!opts.fail_fast || rec.results.back().passed) criterion_index_sum(rec);
    if (!opts.fail_fast || rec.results.back().passed) criterion_solvability_oracle(rec, state);
    if (!opts.fail_fast || rec.results.back().passed) criterion_round_trips(rec);
    if (!opts.fail_fast || rec.results.back().passed) criterion_cross_formulas(rec);
    if (!opts.fail_fast || rec.results.back().passed) criterion_regularization(rec);
    if (!opts.fail_fast || rec.results.back().passed) criterion_monodromy(rec, cache);
    if (!opts.fail_fast || rec.results.back().passed) criterion_exponents(rec, cache);
    if (!opts.fail_fast || rec.results.back().passed) criterion_chern(rec, cache);
    if (!opts.fail_fast || rec.results.back().passed) criterion_reduction(rec);
    if (!opts.fail_fast || rec.results.back().passed) criterion_wronskian(rec);
    return rec.results;
}

}  // namespace rhb
