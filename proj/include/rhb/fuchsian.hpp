#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "rhb/birkhoff.hpp"
#include "rhb/matfun.hpp"
#include "rhb/types.hpp"

namespace rhb {

/// Fuchsian system df = sum_i A_i/(z - s_i) f dz on the sphere.  When
/// infinity is not marked the residues must sum to zero; when it is marked
/// its residue is the implied -sum A_i.
struct FuchsianSystem {
    std::vector<cplx> points;   // finite marked points
    std::vector<Mat> residues;  // aligned with points
    cplx basepoint;
    bool infinity_marked = false;

    int dim() const { return residues.empty() ? 0 : static_cast<int>(residues.front().rows()); }
    Mat residue_at_infinity() const;
    Mat coefficient(cplx z) const;
};

/// System with regular singular points of finite pole order:
/// A(z) = sum_j sum_k parts[j][k-1] (z - s_j)^{-k} + sum_q poly[q] z^q.
struct RegularSystem {
    std::vector<cplx> points;
    std::vector<std::vector<Mat>> parts;  // parts[j][k-1]: coefficient of (z-s_j)^{-k}
    std::vector<Mat> poly;                // polynomial part (present after shears)
    cplx basepoint;

    int dim() const;
    int pole_order(int j) const;
    Mat residue(int j) const { return parts[static_cast<size_t>(j)].front(); }
    Mat coefficient(cplx z) const;
    /// Residue of the coefficient 1-form at infinity (valid when poly is empty).
    Mat residue_at_infinity() const;
    bool infinity_singular() const;
};

RegularSystem to_regular(const FuchsianSystem& sys);

struct ValidationReport {
    bool valid = true;
    double residue_sum_defect = 0.0;
    std::vector<std::string> problems;
    std::vector<Vec> point_eigenvalues;  // one entry per finite point, infinity last if marked
};

/// Checks the residue-sum constraint, distinctness of the marked points, and
/// reports per-point residue eigenvalues.
ValidationReport validate_fuchsian(const FuchsianSystem& sys);

/// Ordered monodromy generators.  Generators are indexed by increasing
/// argument of s_i - z0, infinity last; each one is the transfer matrix of a
/// ray-circle-ray loop, counterclockwise around its point.  Continuation
/// composes left-to-right along the path, so the cycle relation reads
/// G_last * ... * G_first = identity.
struct MonodromyRep {
    std::vector<Mat> generators;
    std::vector<int> point_index;  // -1 marks the generator at infinity
    cplx basepoint;
    double relation_defect = 0.0;  // || product - I ||

    Mat product() const;
};

struct MonodromyOptions {
    double rtol = 1e-10;
    bool include_infinity_when_singular = true;
};

MonodromyRep monodromy(const RegularSystem& sys, const MonodromyOptions& opts = {});
MonodromyRep monodromy(const FuchsianSystem& sys, const MonodromyOptions& opts = {});

/// Levelt data at one singular point: integer valuations phi (weakly
/// decreasing), normalized monodromy exponents mu with Re in [0, 1), and the
/// combined exponents beta = phi + mu.
struct LeveltEntry {
    cplx point;
    bool at_infinity = false;
    std::vector<int> phi;
    std::vector<cplx> mu;
    std::vector<cplx> beta;
};

/// Exponents at a Fuchsian non-resonant point, split from the residue
/// eigenvalues: beta = phi + mu with phi = floor(Re beta).  point_index == -1
/// addresses infinity (resonant points are rejected).
LeveltEntry local_exponents(const FuchsianSystem& sys, int point_index);
LeveltEntry local_exponents(const RegularSystem& sys, int point_index);

struct LeveltRegularOptions {
    double rtol = 1e-11;
    int circle_samples = 128;
    int max_order = 10;       // Laurent window of the single-valued frame
    double rank_cutoff = 1e-6;
};

/// Levelt data at a regular singular point of any pole order, from the
/// valuation profile of the single-valued frame Z = Phi (z-s)^{-E}.
LeveltEntry levelt_at_regular_point(const RegularSystem& sys, int point_index,
                                    const LeveltRegularOptions& opts = {});

struct BetaReport {
    double beta_sum = 0.0;    // sum over points and rows of Re beta
    long long beta_int = 0;   // rounded value
    bool integral = false;    // |beta_sum - beta_int| <= tol and Im parts vanish
    bool fuchsian = false;    // beta_int == 0
};

/// Prop. "the exponent sum is a nonpositive integer, zero iff Fuchsian",
/// evaluated on assembled Levelt data.
BetaReport fuchs_weight_beta(const std::vector<LeveltEntry>& data, double tol = 1e-8);

/// c_1 of the canonical extension: sum of traces of normalized logarithms of
/// the generators; must be an integer.
long long chern_canonical(const std::vector<Mat>& generators, double tol = 1e-8);

/// Rational gauge H(z) given as a product of constant factors and diagonal
/// power factors diag((z-s)^{d_1}, ..., (z-s)^{d_n}); leftmost factor first.
struct GaugeFactor {
    enum class Kind { Constant, Power } kind = Kind::Constant;
    Mat constant;               // Kind::Constant
    cplx point;                 // Kind::Power
    std::vector<int> exponents; // Kind::Power
};

class GaugeChain {
public:
    GaugeChain() = default;

    bool empty() const { return factors_.empty(); }
    const std::vector<GaugeFactor>& factors() const { return factors_; }
    void push_left(GaugeFactor f) { factors_.insert(factors_.begin(), std::move(f)); }
    void push_right(GaugeFactor f) { factors_.push_back(std::move(f)); }

    Mat evaluate(cplx z, int dim) const;
    Mat derivative(cplx z, int dim) const;
    GaugeChain inverse() const;
    std::vector<cplx> power_points() const;

private:
    std::vector<GaugeFactor> factors_;
};

struct GaugeOptions {
    int max_pole_order = 8;
    int circle_samples = 64;
    int max_poly_degree = 16;
    double coeff_floor = 1e-11;
};

/// B = dH/dz H^{-1} + H A H^{-1}; principal parts of the result are extracted
/// by contour sampling around the union of marked and gauge points.
RegularSystem gauge_transform(const RegularSystem& sys, const GaugeChain& H,
                              const GaugeOptions& opts = {});
RegularSystem gauge_transform(const FuchsianSystem& sys, const GaugeChain& H,
                              const GaugeOptions& opts = {});

struct ReductionResult {
    RegularSystem system;  // Fuchsian at the finite marked points, apparent point at infinity
    GaugeChain T;          // accumulated transformation, g = T(z) f
    int steps = 0;
};

/// Exponent reduction: eigenvector-aligned constant conjugations and diagonal
/// shears (z - s_j)^{diag(-+1,0,...,0)} until every finite exponent satisfies
/// floor(Re beta) = 0.
ReductionResult reduce_exponents(const FuchsianSystem& sys, int max_steps = 256);

/// Splitting type of the canonical extension: Birkhoff indices of the
/// accumulated T(z) on a circle separating the marked points from infinity,
/// negated and sorted decreasingly.
SplittingType splitting_via_reduction(const FuchsianSystem& sys);

/// Wronskian of one row of a fundamental solution, W(z) = det[D^k f_j], with
/// derivatives generated from the coefficient jets.  Continuation is tracked
/// from the basepoint.
class WronskianEvaluator {
public:
    WronskianEvaluator(RegularSystem sys, int row, double rtol = 1e-11);

    /// W at the end of a straight segment from the current anchor.
    cplx value_at(cplx z);
    /// Reset continuation to the basepoint.
    void reset();
    cplx anchor() const { return anchor_; }
    const RegularSystem& system() const { return sys_; }

    /// Move the anchored frame along a segment (continuation).
    void march_to(cplx z);
    cplx wronskian_here() const;

private:
    RegularSystem sys_;
    int row_;
    double rtol_;
    cplx anchor_;
    Mat frame_;  // fundamental solution at the anchor
};

WronskianEvaluator scalarize(const FuchsianSystem& sys, int row);
WronskianEvaluator scalarize(const RegularSystem& sys, int row);

struct WronskianCountOptions {
    int min_samples = 512;
    double order_fit_shrink = 1e-7;  // innermost radius factor for pole-order fits
    double rtol = 1e-11;
};

/// Apparent singularity count inside |z| = radius by the argument principle,
/// with the local orders of W at enclosed marked points subtracted.
int count_wronskian_zeros(WronskianEvaluator& w, double radius,
                          const WronskianCountOptions& opts = {});

/// Fuchsian candidate from piecewise-constant transmission data:
/// omega = sum_i E_i dz/(z - s_i) with E_i = normalized_log(G_i).
FuchsianSystem fuchsian_from_jumps(const std::vector<cplx>& points,
                                   const std::vector<Mat>& jumps, cplx basepoint);

/// True when a single invertible C with M_i C = C G_i for all i exists
/// (common intertwiner, i.e. the representations agree up to conjugation).
bool monodromy_matches_up_to_conjugation(const std::vector<Mat>& computed,
                                         const std::vector<Mat>& expected, double tol = 1e-7);

}  // namespace rhb
