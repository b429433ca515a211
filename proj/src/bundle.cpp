#include "rhb/bundle.hpp"

#include <numeric>

namespace rhb {

Rational::Rational(long long num, long long den) : num_(num), den_(den) {
    if (den_ == 0) throw validation_error("rational with zero denominator");
    if (den_ < 0) { num_ = -num_; den_ = -den_; }
    long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) { num_ /= g; den_ /= g; }
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}
Rational Rational::operator-(const Rational& o) const {
    return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}
Rational Rational::operator*(const Rational& o) const {
    return Rational(num_ * o.num_, den_ * o.den_);
}
bool Rational::operator<(const Rational& o) const {
    return num_ * o.den_ < o.num_ * den_;
}
std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

long long chern_number(const SplittingType& K) { return K.sum(); }

long long weight_tau(const SplittingType& K) {
    long long tau = 0;
    for (int e : K.entries()) tau += K.top() - e;
    return tau;
}

long long reduced_dimension_nu(const SplittingType& K) {
    long long nu = 0;
    for (int a : K.entries())
        for (int b : K.entries())
            if (a > b) nu += a - b;
    return nu;
}

SplittingType splitting_from_invariants_rank2(long long c1, long long nu) {
    if (nu < 0) throw validation_error("nu must be nonnegative");
    if ((c1 + nu) % 2 != 0)
        throw validation_error("no rank-2 bundle realizes (c1, nu): parity violation");
    long long k1 = (c1 + nu) / 2;
    long long k2 = (c1 - nu) / 2;
    return SplittingType({static_cast<int>(k1), static_cast<int>(k2)});
}

SplittingType splitting_from_invariants_rank3(long long c1, long long tau, long long nu) {
    Rational k1 = Rational(c1 + tau, 3);
    Rational k2 = Rational(c1, 3) - Rational(2 * tau, 3) + Rational(nu, 2);
    Rational k3 = Rational(c1 + tau, 3) - Rational(nu, 2);
    if (!k1.is_integer() || !k2.is_integer() || !k3.is_integer())
        throw validation_error("invariant triple (c1, tau, nu) is not realizable: non-integral splitting");
    if (k1 < k2 || k2 < k3)
        throw validation_error("invariant triple (c1, tau, nu) is not realizable: ordering violation");
    return SplittingType({static_cast<int>(k1.num()), static_cast<int>(k2.num()),
                          static_cast<int>(k3.num())});
}

SolvabilityCount solvability_count(const SplittingType& K) {
    SolvabilityCount out;
    for (int e : K.entries()) out.l += std::max(e + 1, 0);
    out.solvable = out.l > 0;
    return out;
}

EndoCohomology endo_cohomology(const SplittingType& K) {
    EndoCohomology out;
    for (int a : K.entries())
        for (int b : K.entries()) {
            const int d = a - b;
            if (d >= 0) out.h0 += d + 1;
            if (d >= 2) out.h1 += d - 1;
        }
    return out;
}

Rational slope(const SplittingType& K) { return Rational(K.sum(), K.rank()); }

long long apparent_bound_ohtsuki(int n, int g, int m) {
    return 1LL - static_cast<long long>(n) * (1 - g) +
           static_cast<long long>(n) * (n - 1) / 2 * (m + 2 * g - 2);
}

long long apparent_bound_corollary(int n, int g) {
    return static_cast<long long>(n) * n * g - static_cast<long long>(n) * (n - 1) / 2 + 1;
}

long long partial_index_bound(int n, int m, int l) {
    return static_cast<long long>(m - 2) * n * (n - 1) / 2 + 1 - l;
}

bool satisfies_partial_index_bound(const SplittingType& K, int m, int l) {
    return weight_tau(K) <= partial_index_bound(K.rank(), m, l);
}

long long minimal_singularities_rank2(const SplittingType& K) {
    if (K.rank() != 2) throw validation_error("minimal_singularities_rank2 needs rank 2");
    return static_cast<long long>(K.top()) - K.bottom() + 2;
}

Rational type_codimension(const std::vector<Rational>& mu, int g) {
    for (size_t i = 1; i < mu.size(); ++i)
        if (mu[i - 1] < mu[i]) throw validation_error("type must be weakly decreasing");
    Rational out(0);
    for (const auto& a : mu)
        for (const auto& b : mu)
            if (a > b) out = out + (a - b) + Rational(g - 1);
    return out;
}

long long moduli_dimension(int n, int g) {
    return static_cast<long long>(n) * n * (g - 1) + 1;
}

}  // namespace rhb
