#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rhb/birkhoff.hpp"

namespace rhb {

/// Exact rational with 64-bit numerator and denominator, always normalized
/// with positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(long long num, long long den = 1);

    long long num() const { return num_; }
    long long den() const { return den_; }

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator<(const Rational& o) const;
    bool operator>(const Rational& o) const { return o < *this; }

    bool is_integer() const { return den_ == 1; }
    std::string str() const;

private:
    long long num_ = 0;
    long long den_ = 1;
};

// Closed-form invariants of the bundle E(k_1) + ... + E(k_n) on the sphere.

/// c_1 = sum k_i.
long long chern_number(const SplittingType& K);

/// tau = sum (k_1 - k_i) = n k_1 - c_1.
long long weight_tau(const SplittingType& K);

/// nu = sum over strict ordered pairs k_i > k_j of (k_i - k_j).
long long reduced_dimension_nu(const SplittingType& K);

/// Rank-2 inversion: k_1 = (c1 + nu)/2, k_2 = (c1 - nu)/2.
SplittingType splitting_from_invariants_rank2(long long c1, long long nu);

/// Rank-3 inversion: k_1 = (c1 + tau)/3, k_2 = c1/3 - 2 tau/3 + nu/2,
/// k_3 = (c1 + tau)/3 - nu/2.
SplittingType splitting_from_invariants_rank3(long long c1, long long tau, long long nu);

struct SolvabilityCount {
    bool solvable = false;
    long long l = 0;  // dim H^0(CP^1, O(E)) = sum max(k_i + 1, 0)
};

SolvabilityCount solvability_count(const SplittingType& K);

struct EndoCohomology {
    long long h0 = 0;  // sum over k_i >= k_j of (k_i - k_j + 1)
    long long h1 = 0;  // sum over k_i - k_j >= 2 of (k_i - k_j - 1)
};

EndoCohomology endo_cohomology(const SplittingType& K);

/// Normalized Chern class mu(E) = c_1 / n, exact.
Rational slope(const SplittingType& K);

/// Ohtsuki bound 1 - n(1-g) + n(n-1)/2 * (m + 2g - 2) on apparent
/// singularities, m = card S.
long long apparent_bound_ohtsuki(int n, int g, int m);

/// Corollary bound n^2 g - n(n-1)/2 + 1.
long long apparent_bound_corollary(int n, int g);

/// Right-hand side of the partial index estimate
/// sum (k_1 - k_i) <= (m-2) n(n-1)/2 + 1 - l.
long long partial_index_bound(int n, int m, int l);

/// Whether weight_tau(K) satisfies the partial index estimate.
bool satisfies_partial_index_bound(const SplittingType& K, int m, int l);

/// Minimal number of simple poles of an irreducible rank-2 connexion,
/// p = k_1 - k_2 + 2.
long long minimal_singularities_rank2(const SplittingType& K);

/// Codimension of the type stratum: sum over strict pairs mu_i > mu_j of
/// (mu_i - mu_j + g - 1).
Rational type_codimension(const std::vector<Rational>& mu, int g);

/// dim H^1(X, O(End E)) = n^2 (g - 1) + 1 for stable E.
long long moduli_dimension(int n, int g);

}  // namespace rhb
