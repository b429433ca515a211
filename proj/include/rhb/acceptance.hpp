#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rhb/fuchsian.hpp"
#include "rhb/loop.hpp"
#include "rhb/regularize.hpp"

namespace rhb {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::uint64_t seed = 746391;
    bool fail_fast = false;
};

/// Runs the full acceptance suite and returns one result per criterion.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

/// Shared deterministic fixtures.
namespace fixtures {

/// Commuting pair A, -A with nilpotent A at +-1; closed-form monodromy.
FuchsianSystem commuting_nilpotent();

/// Companion system of the hypergeometric equation with residues
/// [[0,0],[-ab,-c]] at 0 and [[0,1],[0,c-a-b]] at 1; infinity marked.
FuchsianSystem hypergeometric(double a, double b, double c);

/// Rank-3 system with a second-order pole at 0 and Fuchsian points at
/// -1, 1, 1/2; regular but not Fuchsian, reducible monodromy fixing e1.
RegularSystem regular_rank3();

/// Unipotent triple G1, G2, G3 with product identity, c1 = c2 = 1.
std::vector<Mat> unipotent_triple();

/// Fuchsian system from the unipotent triple via normalized logarithms.
FuchsianSystem unipotent_triple_system();

/// diag(1, 0)/z with infinity marked; one shear reduces it.
FuchsianSystem diag_shear_example();

PiecewiseLoop scalar_two_jump();
PiecewiseLoop generic_two_jump_2x2();
PiecewiseLoop unipotent_triple_piecewise();

}  // namespace fixtures

namespace testgen {

/// Weakly decreasing integer vector, entries uniform in [lo, hi].
std::vector<int> random_splitting(std::uint64_t& state, int n, int lo, int hi);

/// f^+ = I + sum_{q=1..deg} C_q z^q with sum ||C_q|| <= margin < 1, so the
/// factor is holomorphically invertible in a disk of radius above one.
MatrixLoop random_plus_factor(std::uint64_t& state, int n, int deg, double margin = 0.35);
/// Mirror factor in 1/z with value identity at infinity.
MatrixLoop random_minus_factor(std::uint64_t& state, int n, int deg, double margin = 0.35);

/// Unipotent upper/lower triangular polynomial loops with polynomial inverse.
MatrixLoop random_unipotent_plus(std::uint64_t& state, int n, int deg);
MatrixLoop random_unipotent_minus(std::uint64_t& state, int n, int deg);

/// f^- d_K f^+ sampled on a grid, with the planted type returned.
MatrixLoop assemble_symbol(const MatrixLoop& minus, const std::vector<int>& K,
                           const MatrixLoop& plus, int grid = 256);

double uniform(std::uint64_t& state);  // [0, 1)

}  // namespace testgen

}  // namespace rhb
