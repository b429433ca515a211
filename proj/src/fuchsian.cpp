#include "rhb/fuchsian.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ode_detail.hpp"
#include "rhb/grid.hpp"

namespace rhb {

namespace {

double system_scale(const std::vector<Mat>& mats) {
    double s = 1.0;
    for (const auto& m : mats) s = std::max(s, m.norm());
    return s;
}

Mat poly_eval(const std::vector<Mat>& poly, cplx z, int n) {
    Mat out = Mat::Zero(n, n);
    cplx zq = 1.0;
    for (const auto& p : poly) {
        out += p * zq;
        zq *= z;
    }
    return out;
}

/// Distance from point p to the segment [a, b].
double segment_distance(cplx a, cplx b, cplx p) {
    const cplx d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(p - a);
    double t = ((p - a) * std::conj(d)).real() / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

}  // namespace

Mat FuchsianSystem::residue_at_infinity() const {
    Mat sum = Mat::Zero(dim(), dim());
    for (const auto& a : residues) sum += a;
    return -sum;
}

Mat FuchsianSystem::coefficient(cplx z) const {
    Mat out = Mat::Zero(dim(), dim());
    for (size_t i = 0; i < points.size(); ++i) out += residues[i] / (z - points[i]);
    return out;
}

int RegularSystem::dim() const {
    if (!parts.empty() && !parts.front().empty()) return static_cast<int>(parts.front().front().rows());
    if (!poly.empty()) return static_cast<int>(poly.front().rows());
    return 0;
}

int RegularSystem::pole_order(int j) const {
    return static_cast<int>(parts[static_cast<size_t>(j)].size());
}

Mat RegularSystem::coefficient(cplx z) const {
    const int n = dim();
    Mat out = poly_eval(poly, z, n);
    for (size_t j = 0; j < points.size(); ++j) {
        cplx w = 1.0;
        for (size_t k = 0; k < parts[j].size(); ++k) {
            w /= (z - points[j]);
            out += parts[j][k] * w;
        }
    }
    return out;
}

Mat RegularSystem::residue_at_infinity() const {
    Mat sum = Mat::Zero(dim(), dim());
    for (size_t j = 0; j < points.size(); ++j) sum += parts[j].front();
    return -sum;
}

bool RegularSystem::infinity_singular() const {
    for (const auto& p : poly)
        if (p.norm() > 1e-12) return true;
    Mat sum = Mat::Zero(dim(), dim());
    double scale = 1.0;
    for (size_t j = 0; j < points.size(); ++j) {
        sum += parts[j].front();
        scale = std::max(scale, parts[j].front().norm());
    }
    return sum.norm() > 1e-10 * scale;
}

RegularSystem to_regular(const FuchsianSystem& sys) {
    RegularSystem out;
    out.points = sys.points;
    out.basepoint = sys.basepoint;
    for (const auto& a : sys.residues) out.parts.push_back({a});
    return out;
}

ValidationReport validate_fuchsian(const FuchsianSystem& sys) {
    ValidationReport rep;
    if (sys.points.size() != sys.residues.size()) {
        rep.valid = false;
        rep.problems.push_back("point and residue counts differ");
        return rep;
    }
    const int n = sys.dim();
    for (const auto& a : sys.residues)
        if (a.rows() != n || a.cols() != n) {
            rep.valid = false;
            rep.problems.push_back("residue shape mismatch");
            return rep;
        }
    for (size_t i = 0; i < sys.points.size(); ++i)
        for (size_t j = i + 1; j < sys.points.size(); ++j)
            if (std::abs(sys.points[i] - sys.points[j]) < 1e-12) {
                rep.valid = false;
                rep.problems.push_back("coincident marked points");
            }
    for (const auto& s : sys.points)
        if (std::abs(sys.basepoint - s) < 1e-12) {
            rep.valid = false;
            rep.problems.push_back("basepoint coincides with a marked point");
        }
    Mat sum = Mat::Zero(n, n);
    for (const auto& a : sys.residues) sum += a;
    rep.residue_sum_defect = sum.norm();
    if (!sys.infinity_marked && rep.residue_sum_defect > 1e-10 * system_scale(sys.residues)) {
        rep.valid = false;
        rep.problems.push_back("residues do not sum to zero and infinity is not marked");
    }
    for (const auto& a : sys.residues) {
        Eigen::ComplexEigenSolver<Mat> es(a, false);
        rep.point_eigenvalues.push_back(es.eigenvalues());
    }
    if (sys.infinity_marked) {
        Eigen::ComplexEigenSolver<Mat> es(sys.residue_at_infinity(), false);
        rep.point_eigenvalues.push_back(es.eigenvalues());
    }
    return rep;
}

// ---------------------------------------------------------------------------
// monodromy

namespace {

struct LoopPaths {
    std::vector<int> order;  // finite point indices sorted by argument from z0
    bool with_infinity = false;
};

double loop_radius(const std::vector<cplx>& pts, cplx z0, size_t i) {
    double d = 2.0 * std::abs(pts[i] - z0);
    for (size_t j = 0; j < pts.size(); ++j)
        if (j != i) d = std::min(d, std::abs(pts[i] - pts[j]));
    return 0.25 * std::min(d, 2.0 * std::abs(pts[i] - z0));
}

void check_near_pass(cplx a, cplx b, const std::vector<cplx>& pts, cplx /*z0*/,
                     const std::vector<double>& radii, size_t skip) {
    for (size_t j = 0; j < pts.size(); ++j) {
        if (j == skip) continue;
        if (segment_distance(a, b, pts[j]) < 1e-3 * radii[j])
            throw numerical_error("generator path passes too close to a singular point; "
                                  "choose a different basepoint");
    }
}

MonodromyRep monodromy_impl(const std::function<Mat(cplx)>& coeff, const std::vector<cplx>& pts,
                            cplx z0, int n, bool with_inf, double rtol) {
    for (const auto& s : pts)
        if (std::abs(z0 - s) < 1e-12) throw validation_error("basepoint coincides with a marked point");

    std::vector<double> radii(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) radii[i] = loop_radius(pts, z0, i);

    detail::OdeOptions ode;
    ode.rtol = rtol;
    ode.min_distance = [pts](cplx z) {
        double d = 1e300;
        for (const auto& s : pts) d = std::min(d, std::abs(z - s));
        return std::max(d, 1e-8);
    };

    std::vector<int> order(pts.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return std::arg(pts[static_cast<size_t>(a)] - z0) < std::arg(pts[static_cast<size_t>(b)] - z0);
    });

    MonodromyRep rep;
    rep.basepoint = z0;
    for (int idx : order) {
        const cplx s = pts[static_cast<size_t>(idx)];
        const double r = radii[static_cast<size_t>(idx)];
        const cplx dir = (z0 - s) / std::abs(z0 - s);
        const cplx entry = s + r * dir;
        check_near_pass(z0, entry, pts, z0, radii, static_cast<size_t>(idx));
        const double phi = std::arg(dir);
        std::vector<detail::PathLeg> legs;
        legs.push_back(detail::line_leg(z0, entry));
        legs.push_back(detail::arc_leg(s, r, phi, phi + 2.0 * pi));
        legs.push_back(detail::line_leg(entry, z0));
        rep.generators.push_back(detail::transfer_matrix(coeff, legs, n, ode));
        rep.point_index.push_back(idx);
    }
    if (with_inf) {
        double rmax = std::abs(z0);
        for (const auto& s : pts) rmax = std::max(rmax, std::abs(s));
        const double R = 2.0 * rmax + 1.0;
        const cplx dir = std::abs(z0) > 1e-12 ? z0 / std::abs(z0) : cplx(1.0);
        const cplx w0 = R * dir;
        check_near_pass(z0, w0, pts, z0, radii, pts.size());
        const double phi = std::arg(dir);
        std::vector<detail::PathLeg> legs;
        legs.push_back(detail::line_leg(z0, w0));
        legs.push_back(detail::arc_leg(0.0, R, phi, phi - 2.0 * pi));  // ccw around infinity
        legs.push_back(detail::line_leg(w0, z0));
        rep.generators.push_back(detail::transfer_matrix(coeff, legs, n, ode));
        rep.point_index.push_back(-1);
    }
    rep.relation_defect = (rep.product() - Mat::Identity(n, n)).norm();
    return rep;
}

}  // namespace

Mat MonodromyRep::product() const {
    const int n = static_cast<int>(generators.front().rows());
    Mat p = Mat::Identity(n, n);
    for (const auto& g : generators) p = g * p;  // later loops act on the left
    return p;
}

MonodromyRep monodromy(const RegularSystem& sys, const MonodromyOptions& opts) {
    const bool with_inf = opts.include_infinity_when_singular && sys.infinity_singular();
    return monodromy_impl([&sys](cplx z) { return sys.coefficient(z); }, sys.points,
                          sys.basepoint, sys.dim(), with_inf, opts.rtol);
}

MonodromyRep monodromy(const FuchsianSystem& sys, const MonodromyOptions& opts) {
    auto rep = validate_fuchsian(sys);
    if (!rep.valid) throw validation_error("invalid Fuchsian system: " + rep.problems.front());
    const bool with_inf = opts.include_infinity_when_singular && sys.infinity_marked;
    return monodromy_impl([&sys](cplx z) { return sys.coefficient(z); }, sys.points,
                          sys.basepoint, sys.dim(), with_inf, opts.rtol);
}

// ---------------------------------------------------------------------------
// Levelt data

namespace {

LeveltEntry levelt_from_eigenvalues(const Vec& beta, cplx point, bool at_inf) {
    const int n = static_cast<int>(beta.size());
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            const cplx d = beta(a) - beta(b);
            const double m = std::round(d.real());
            if (std::abs(m) >= 0.5 && std::abs(d.real() - m) < 1e-8 && std::abs(d.imag()) < 1e-8)
                throw validation_error("resonant exponents (eigenvalues differ by a nonzero integer)");
        }
    struct Slot { int phi; cplx mu; cplx beta; };
    std::vector<Slot> slots;
    for (int i = 0; i < n; ++i) {
        const cplx b = beta(i);
        const int phi = static_cast<int>(std::floor(b.real() + 1e-9));
        slots.push_back({phi, b - static_cast<double>(phi), b});
    }
    std::sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) {
        if (a.phi != b.phi) return a.phi > b.phi;
        if (a.beta.real() != b.beta.real()) return a.beta.real() > b.beta.real();
        return a.beta.imag() > b.beta.imag();
    });
    LeveltEntry e;
    e.point = point;
    e.at_infinity = at_inf;
    for (const auto& s : slots) {
        e.phi.push_back(s.phi);
        e.mu.push_back(s.mu);
        e.beta.push_back(s.beta);
    }
    return e;
}

}  // namespace

LeveltEntry local_exponents(const FuchsianSystem& sys, int point_index) {
    Mat a;
    cplx pt;
    bool at_inf = false;
    if (point_index == -1) {
        if (!sys.infinity_marked) throw validation_error("infinity is not a marked point");
        a = sys.residue_at_infinity();
        at_inf = true;
    } else {
        a = sys.residues.at(static_cast<size_t>(point_index));
        pt = sys.points.at(static_cast<size_t>(point_index));
    }
    Eigen::ComplexEigenSolver<Mat> es(a, false);
    return levelt_from_eigenvalues(es.eigenvalues(), pt, at_inf);
}

LeveltEntry local_exponents(const RegularSystem& sys, int point_index) {
    Mat a;
    cplx pt;
    bool at_inf = false;
    if (point_index == -1) {
        for (const auto& p : sys.poly)
            if (p.norm() > 1e-12)
                throw validation_error("infinity is not Fuchsian for this system");
        a = sys.residue_at_infinity();
        at_inf = true;
    } else {
        if (sys.pole_order(point_index) != 1)
            throw validation_error("point is not Fuchsian; use levelt_at_regular_point");
        a = sys.residue(point_index);
        pt = sys.points.at(static_cast<size_t>(point_index));
    }
    Eigen::ComplexEigenSolver<Mat> es(a, false);
    return levelt_from_eigenvalues(es.eigenvalues(), pt, at_inf);
}

LeveltEntry levelt_at_regular_point(const RegularSystem& sys, int point_index,
                                    const LeveltRegularOptions& opts) {
    const int n = sys.dim();
    const cplx s = sys.points.at(static_cast<size_t>(point_index));
    double dmin = 2.0 * std::abs(sys.basepoint - s);
    for (size_t j = 0; j < sys.points.size(); ++j)
        if (static_cast<int>(j) != point_index) dmin = std::min(dmin, std::abs(sys.points[j] - s));
    const double r0 = 0.25 * dmin;
    const double th0 = std::arg(sys.basepoint - s);
    const int Nc = opts.circle_samples;

    detail::OdeOptions ode;
    ode.rtol = opts.rtol;
    ode.min_distance = [&sys](cplx z) {
        double d = 1e300;
        for (const auto& p : sys.points) d = std::min(d, std::abs(z - p));
        return std::max(d, 1e-10);
    };
    auto coeff = [&sys](cplx z) { return sys.coefficient(z); };

    // fundamental frame along the circle, anchored I at angle th0
    std::vector<Mat> frames;
    frames.reserve(static_cast<size_t>(Nc) + 1);
    Mat psi = Mat::Identity(n, n);
    frames.push_back(psi);
    for (int k = 0; k < Nc; ++k) {
        const double a = th0 + 2.0 * pi * k / Nc;
        const double b = th0 + 2.0 * pi * (k + 1) / Nc;
        psi = detail::transfer_matrix(coeff, detail::arc_leg(s, r0, a, b), n, ode) * psi;
        frames.push_back(psi);
    }
    const Mat M = frames.back();
    const Mat E = normalized_log(M);

    // single-valued frame Z = Psi (z-s)^{-E} with the argument tracked
    std::vector<Mat> zs(static_cast<size_t>(Nc));
    for (int k = 0; k < Nc; ++k) {
        const cplx L = std::log(r0) + iu * (th0 + 2.0 * pi * k / Nc);
        zs[static_cast<size_t>(k)] = frames[static_cast<size_t>(k)] * matrix_exp(-E * L);
    }
    {
        const cplx L = std::log(r0) + iu * (th0 + 2.0 * pi);
        const Mat wrap = frames.back() * matrix_exp(-E * L);
        if ((wrap - zs[0]).norm() > 1e-6 * std::max(1.0, zs[0].norm()))
            throw numerical_error("single-valued frame check failed; monodromy log inconsistent");
    }

    // Laurent window of Z
    const int W = opts.max_order;
    std::vector<Mat> laurent(static_cast<size_t>(2 * W + 1), Mat::Zero(n, n));
    for (int m = -W; m <= W; ++m) {
        Mat acc = Mat::Zero(n, n);
        for (int k = 0; k < Nc; ++k) {
            const double th = 2.0 * pi * k / Nc;
            acc += zs[static_cast<size_t>(k)] * std::polar(1.0, -m * th);
        }
        acc /= static_cast<double>(Nc);
        // undo radius and anchor-angle scaling of the m-th coefficient
        laurent[static_cast<size_t>(m + W)] = acc * std::polar(std::pow(r0, -m), -m * th0);
    }

    // valuation operators from the monodromy-log eigenstructure
    auto blocks = spectral_blocks(E);
    struct Op { Mat L; int block; };
    std::vector<Op> ops;
    for (size_t b = 0; b < blocks.size(); ++b) {
        Mat power = blocks[b].projector;
        double fact = 1.0;
        for (int q = 0; q < blocks[b].multiplicity; ++q) {
            if (q > 0) {
                power = blocks[b].nilpotent * power / fact;
                fact += 1.0;
            }
            if (power.norm() < 1e-12) break;
            ops.push_back({power, static_cast<int>(b)});
        }
    }

    double zscale = 0.0;
    for (int m = -W; m <= W; ++m)
        for (const auto& op : ops)
            zscale = std::max(zscale, (laurent[static_cast<size_t>(m + W)] * op.L).norm());
    const double floor_tol = 1e-7 * zscale;
    int lo = W + 1;
    for (int m = -W; m <= W; ++m) {
        double mag = 0.0;
        for (const auto& op : ops)
            mag = std::max(mag, (laurent[static_cast<size_t>(m + W)] * op.L).norm());
        if (mag > floor_tol) { lo = m; break; }
    }
    if (lo == -W)
        throw numerical_error("Laurent window too small for the pole order; increase max_order");
    if (lo > W) throw numerical_error("single-valued frame vanished identically");

    // per-eigenvalue valuation profiles: phi(c) >= k iff Z_m L c = 0 for m < k
    LeveltEntry entry;
    entry.point = s;
    auto null_dim = [&](int k, const Mat& basis) {
        std::vector<Mat> rows;
        for (int m = lo; m < k; ++m)
            for (const auto& op : ops) {
                Mat blockrow = laurent[static_cast<size_t>(m + W)] * op.L * basis;
                const double norm = blockrow.norm();
                if (norm > floor_tol) rows.push_back(blockrow / norm);
            }
        if (rows.empty()) return static_cast<int>(basis.cols());
        Mat stacked(static_cast<int>(rows.size()) * n, basis.cols());
        for (size_t r = 0; r < rows.size(); ++r)
            stacked.middleRows(static_cast<int>(r) * n, n) = rows[r];
        Eigen::BDCSVD<Mat> svd(stacked);
        const auto& sv = svd.singularValues();
        int rank = 0;
        for (int i = 0; i < sv.size(); ++i)
            if (sv(i) > opts.rank_cutoff * sv(0)) ++rank;
        return static_cast<int>(basis.cols()) - rank;
    };

    struct Slot { int phi; cplx mu; };
    std::vector<Slot> slots;
    for (const auto& blk : blocks) {
        // orthonormal basis of the generalized eigenspace
        Eigen::BDCSVD<Mat> svd(blk.projector, Eigen::ComputeThinU);
        Mat basis = svd.matrixU().leftCols(blk.multiplicity);
        int prev = null_dim(lo, basis);
        for (int k = lo; prev > 0; ++k) {
            if (k - lo > 4 * W + 8)
                throw numerical_error("valuation profile did not terminate; increase max_order");
            int next = null_dim(k + 1, basis);
            for (int c = 0; c < prev - next; ++c) slots.push_back({k, blk.eigenvalue});
            prev = next;
        }
    }
    if (static_cast<int>(slots.size()) != n)
        throw numerical_error("valuation profile size mismatch; rank cutoff unreliable here");
    std::sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) {
        if (a.phi != b.phi) return a.phi > b.phi;
        return a.mu.real() > b.mu.real();
    });
    for (const auto& sl : slots) {
        entry.phi.push_back(sl.phi);
        entry.mu.push_back(sl.mu);
        entry.beta.push_back(static_cast<double>(sl.phi) + sl.mu);
    }
    return entry;
}

BetaReport fuchs_weight_beta(const std::vector<LeveltEntry>& data, double tol) {
    BetaReport rep;
    cplx total = 0.0;
    for (const auto& e : data)
        for (const auto& b : e.beta) total += b;
    rep.beta_sum = total.real();
    rep.beta_int = static_cast<long long>(std::llround(total.real()));
    rep.integral = std::abs(total.imag()) <= tol &&
                   std::abs(total.real() - static_cast<double>(rep.beta_int)) <= tol;
    rep.fuchsian = rep.integral && rep.beta_int == 0;
    return rep;
}

long long chern_canonical(const std::vector<Mat>& generators, double tol) {
    cplx total = 0.0;
    for (const auto& g : generators) total += normalized_log(g).trace();
    const double r = std::round(total.real());
    if (std::abs(total.real() - r) > tol || std::abs(total.imag()) > tol)
        throw numerical_error("canonical Chern sum is not an integer; branch normalization inconsistent");
    return static_cast<long long>(r);
}

// ---------------------------------------------------------------------------
// gauge machinery

Mat GaugeChain::evaluate(cplx z, int dim) const {
    Mat h = Mat::Identity(dim, dim);
    for (const auto& f : factors_) {
        if (f.kind == GaugeFactor::Kind::Constant) {
            h = h * f.constant;
        } else {
            Mat d = Mat::Zero(dim, dim);
            for (int i = 0; i < dim; ++i)
                d(i, i) = std::pow(z - f.point, f.exponents[static_cast<size_t>(i)]);
            h = h * d;
        }
    }
    return h;
}

Mat GaugeChain::derivative(cplx z, int dim) const {
    Mat total = Mat::Zero(dim, dim);
    for (size_t t = 0; t < factors_.size(); ++t) {
        if (factors_[t].kind == GaugeFactor::Kind::Constant) continue;
        Mat prod = Mat::Identity(dim, dim);
        for (size_t u = 0; u < factors_.size(); ++u) {
            const auto& f = factors_[u];
            Mat factor;
            if (f.kind == GaugeFactor::Kind::Constant) {
                factor = f.constant;
            } else if (u != t) {
                factor = Mat::Zero(dim, dim);
                for (int i = 0; i < dim; ++i)
                    factor(i, i) = std::pow(z - f.point, f.exponents[static_cast<size_t>(i)]);
            } else {
                factor = Mat::Zero(dim, dim);
                for (int i = 0; i < dim; ++i) {
                    const int e = f.exponents[static_cast<size_t>(i)];
                    if (e != 0)
                        factor(i, i) = static_cast<double>(e) * std::pow(z - f.point, e - 1);
                }
            }
            prod = prod * factor;
        }
        total += prod;
    }
    return total;
}

GaugeChain GaugeChain::inverse() const {
    GaugeChain inv;
    for (const auto& f : factors_) {
        GaugeFactor g = f;
        if (f.kind == GaugeFactor::Kind::Constant) {
            g.constant = f.constant.inverse();
        } else {
            for (auto& e : g.exponents) e = -e;
        }
        inv.push_left(g);  // reverse the order
    }
    return inv;
}

std::vector<cplx> GaugeChain::power_points() const {
    std::vector<cplx> pts;
    for (const auto& f : factors_)
        if (f.kind == GaugeFactor::Kind::Power) {
            bool seen = false;
            for (const auto& p : pts)
                if (std::abs(p - f.point) < 1e-12) seen = true;
            if (!seen) pts.push_back(f.point);
        }
    return pts;
}

RegularSystem gauge_transform(const RegularSystem& sys, const GaugeChain& H,
                              const GaugeOptions& opts) {
    const int n = sys.dim();
    auto bfun = [&](cplx z) -> Mat {
        const Mat h = H.evaluate(z, n);
        const Mat hinv = h.inverse();
        return H.derivative(z, n) * hinv + h * sys.coefficient(z) * hinv;
    };

    std::vector<cplx> pts = sys.points;
    for (const auto& p : H.power_points()) {
        bool seen = false;
        for (const auto& q : pts)
            if (std::abs(p - q) < 1e-12) seen = true;
        if (!seen) pts.push_back(p);
    }

    RegularSystem out;
    out.basepoint = sys.basepoint;
    double scale = 1.0;
    std::vector<std::vector<Mat>> all_parts;
    for (size_t j = 0; j < pts.size(); ++j) {
        double dmin = 1e300;
        for (size_t k = 0; k < pts.size(); ++k)
            if (k != j) dmin = std::min(dmin, std::abs(pts[j] - pts[k]));
        if (dmin == 1e300) dmin = 2.0 * std::max(1.0, std::abs(sys.basepoint - pts[j]));
        const double r = 0.25 * dmin;
        const int Nc = opts.circle_samples;
        std::vector<Mat> samples;
        samples.reserve(static_cast<size_t>(Nc));
        for (int m = 0; m < Nc; ++m) {
            samples.push_back(bfun(pts[j] + std::polar(r, 2.0 * pi * m / Nc)));
            scale = std::max(scale, samples.back().norm() * r);
        }
        std::vector<Mat> parts;
        for (int k = 1; k <= opts.max_pole_order; ++k) {
            Mat acc = Mat::Zero(n, n);
            for (int m = 0; m < Nc; ++m)
                acc += samples[static_cast<size_t>(m)] *
                       std::polar(std::pow(r, k), 2.0 * pi * m * k / Nc);
            parts.push_back(acc / static_cast<double>(Nc));
        }
        while (!parts.empty() && parts.back().norm() < opts.coeff_floor * scale) parts.pop_back();
        all_parts.push_back(std::move(parts));
    }
    for (size_t j = 0; j < pts.size(); ++j) {
        if (all_parts[j].empty()) continue;  // the gauge removed this singularity
        out.points.push_back(pts[j]);
        out.parts.push_back(std::move(all_parts[j]));
    }

    // polynomial part at infinity
    double rmax = 1.0;
    for (const auto& p : pts) rmax = std::max(rmax, std::abs(p));
    const double R = 2.0 * rmax + 2.0;
    const int Nc = 4 * opts.circle_samples;
    std::vector<Mat> big;
    big.reserve(static_cast<size_t>(Nc));
    for (int m = 0; m < Nc; ++m) big.push_back(bfun(std::polar(R, 2.0 * pi * m / Nc)));
    std::vector<Mat> poly;
    for (int q = 0; q <= opts.max_poly_degree; ++q) {
        Mat acc = Mat::Zero(n, n);
        for (int m = 0; m < Nc; ++m)
            acc += big[static_cast<size_t>(m)] * std::polar(std::pow(R, -q), -2.0 * pi * m * q / Nc);
        poly.push_back(acc / static_cast<double>(Nc));
    }
    while (!poly.empty() && poly.back().norm() < opts.coeff_floor * scale) poly.pop_back();
    if (static_cast<int>(poly.size()) > opts.max_poly_degree)
        throw numerical_error("gauge produced a polynomial part above the degree bound");
    out.poly = std::move(poly);
    return out;
}

RegularSystem gauge_transform(const FuchsianSystem& sys, const GaugeChain& H,
                              const GaugeOptions& opts) {
    return gauge_transform(to_regular(sys), H, opts);
}

// ---------------------------------------------------------------------------
// exponent reduction

namespace {

struct RedState {
    std::vector<cplx> pts;
    std::vector<Mat> res;
    std::vector<Mat> poly;  // polynomial part collected by the shears
};

/// Coefficients of (P(z) - P(s))/(z - s), entrywise synthetic division.
std::vector<Mat> poly_quotient(const std::vector<Mat>& poly, cplx s, int n) {
    if (poly.empty()) return {};
    std::vector<Mat> q(poly.size() - 1, Mat::Zero(n, n));
    Mat carry = poly.back();
    for (int k = static_cast<int>(poly.size()) - 2; k >= 0; --k) {
        q[static_cast<size_t>(k)] = carry;
        carry = poly[static_cast<size_t>(k)] + s * carry;
    }
    return q;
}

void apply_constant(RedState& st, const Mat& T, const Mat& Tinv) {
    for (auto& a : st.res) a = T * a * Tinv;
    for (auto& p : st.poly) p = T * p * Tinv;
}

/// Unitary with first column equal to v (up to phase).
Mat unitary_with_first_column(const Vec& v) {
    const int n = static_cast<int>(v.size());
    Mat m = Mat::Zero(n, n);
    m.col(0) = v;
    Eigen::HouseholderQR<Mat> qr(m.leftCols(1));
    Mat q = qr.householderQ();
    // align the phase so q e1 = v/|v|
    const cplx phase = (q.col(0).adjoint() * v)(0);
    q.col(0) *= phase / std::abs(phase);
    return q;
}

/// Shear g = diag((z-s)^{sign}, 1, ..., 1) applied in place; requires the
/// residue at pts[j] to have zero first row (sign=-1) or column (sign=+1)
/// off the corner.
void apply_shear(RedState& st, size_t j, int sign, int n) {
    const cplx s = st.pts[j];
    const std::vector<Mat> old_res = st.res;
    const std::vector<Mat> old_poly = st.poly;
    auto poly_entry_at = [&](int r, int c, cplx z) {
        cplx val = 0.0, zq = 1.0;
        for (const auto& p : old_poly) {
            val += p(r, c) * zq;
            zq *= z;
        }
        return val;
    };

    // conjugation at the other points
    for (size_t k = 0; k < st.res.size(); ++k) {
        if (k == j) continue;
        const cplx w = std::pow(st.pts[k] - s, sign);
        for (int c = 1; c < n; ++c) st.res[k](0, c) = old_res[k](0, c) * w;
        for (int r = 1; r < n; ++r) st.res[k](r, 0) = old_res[k](r, 0) / w;
    }

    Mat& aj = st.res[j];
    if (sign < 0) {
        aj(0, 0) -= 1.0;
        for (int c = 1; c < n; ++c) {
            cplx h = poly_entry_at(0, c, s);
            for (size_t k = 0; k < old_res.size(); ++k)
                if (k != j) h += old_res[k](0, c) / (s - st.pts[k]);
            aj(0, c) = h;
        }
        for (int r = 1; r < n; ++r) aj(r, 0) = 0.0;
    } else {
        aj(0, 0) += 1.0;
        for (int r = 1; r < n; ++r) {
            cplx h = poly_entry_at(r, 0, s);
            for (size_t k = 0; k < old_res.size(); ++k)
                if (k != j) h += old_res[k](r, 0) / (s - st.pts[k]);
            aj(r, 0) = h;
        }
        for (int c = 1; c < n; ++c) aj(0, c) = 0.0;
    }

    // polynomial part: scaled row/column entries
    const int grow_deg = static_cast<int>(old_poly.size()) + 1;
    std::vector<Mat> npoly(static_cast<size_t>(std::max<int>(grow_deg, 1)), Mat::Zero(n, n));
    for (size_t q = 0; q < old_poly.size(); ++q) npoly[q] = old_poly[q];

    auto divide_entry = [&](int r, int c) {
        // (P_rc(z) - P_rc(s))/(z - s); the pole terms contribute nothing
        std::vector<Mat> scalarized(old_poly.size(), Mat::Zero(1, 1));
        for (size_t q = 0; q < old_poly.size(); ++q) scalarized[q](0, 0) = old_poly[q](r, c);
        auto quot = poly_quotient(scalarized, s, 1);
        for (auto& p : npoly) p(r, c) = 0.0;
        for (size_t q = 0; q < quot.size(); ++q) npoly[q](r, c) = quot[q](0, 0);
    };
    auto multiply_entry = [&](int r, int c) {
        // residue constants plus (z - s) P_rc(z)
        cplx csum = 0.0;
        for (const auto& a : old_res) csum += a(r, c);
        for (auto& p : npoly) p(r, c) = 0.0;
        npoly[0](r, c) = csum + (old_poly.empty() ? cplx(0.0) : -s * old_poly[0](r, c));
        for (size_t q = 1; q < old_poly.size() + 1; ++q) {
            cplx v = 0.0;
            if (q - 1 < old_poly.size()) v += old_poly[q - 1](r, c);
            if (q < old_poly.size()) v -= s * old_poly[q](r, c);
            npoly[q](r, c) = v;
        }
    };
    if (sign < 0) {
        for (int c = 1; c < n; ++c) divide_entry(0, c);
        for (int r = 1; r < n; ++r) multiply_entry(r, 0);
    } else {
        for (int r = 1; r < n; ++r) divide_entry(r, 0);
        for (int c = 1; c < n; ++c) multiply_entry(0, c);
    }
    while (!npoly.empty() && npoly.back().norm() == 0.0) npoly.pop_back();
    st.poly = std::move(npoly);
}

}  // namespace

ReductionResult reduce_exponents(const FuchsianSystem& sys, int max_steps) {
    auto rep = validate_fuchsian(sys);
    if (!rep.valid) throw validation_error("invalid Fuchsian system: " + rep.problems.front());
    const int n = sys.dim();
    RedState st{sys.points, sys.residues, {}};
    GaugeChain chain;
    int steps = 0;

    while (true) {
        // pick the worst finite exponent
        int best_j = -1, best_floor = 0;
        cplx best_lambda;
        for (size_t j = 0; j < st.res.size(); ++j) {
            Eigen::ComplexEigenSolver<Mat> es(st.res[j], false);
            for (int i = 0; i < n; ++i) {
                const cplx lam = es.eigenvalues()(i);
                const int f = static_cast<int>(std::floor(lam.real() + 1e-9));
                if (std::abs(f) > std::abs(best_floor) ||
                    (std::abs(f) == std::abs(best_floor) && f != 0 && best_j == -1)) {
                    if (f != 0) {
                        best_j = static_cast<int>(j);
                        best_floor = f;
                        best_lambda = lam;
                    }
                }
            }
        }
        if (best_j < 0) break;
        if (++steps > max_steps)
            throw numerical_error("exponent reduction did not terminate within the step budget");

        const Mat& A = st.res[static_cast<size_t>(best_j)];
        const double scale = std::max(1.0, A.norm());
        const int sign = best_floor >= 1 ? -1 : +1;

        // eigenvector aligned constant conjugation
        Mat shifted = sign < 0 ? Mat(A.transpose()) : A;
        shifted -= best_lambda * Mat::Identity(n, n);
        Eigen::BDCSVD<Mat> svd(shifted, Eigen::ComputeFullV);
        Vec v = svd.matrixV().col(n - 1);
        if ((shifted * v).norm() > 1e-7 * scale)
            throw numerical_error("could not isolate the eigenvector for the exponent shear");
        Mat Q = unitary_with_first_column(v);
        Mat T = sign < 0 ? Mat(Q.transpose()) : Mat(Q.adjoint());
        Mat Tinv = sign < 0 ? Mat(Q.conjugate()) : Mat(Q);
        apply_constant(st, T, Tinv);

        Mat& aj = st.res[static_cast<size_t>(best_j)];
        double defect = 0.0;
        if (sign < 0)
            for (int c = 1; c < n; ++c) defect = std::max(defect, std::abs(aj(0, c)));
        else
            for (int r = 1; r < n; ++r) defect = std::max(defect, std::abs(aj(r, 0)));
        if (defect > 1e-7 * scale)
            throw numerical_error("eigenvector alignment failed; resonance a constant conjugation "
                                  "cannot break at point index " + std::to_string(best_j));
        if (sign < 0)
            for (int c = 1; c < n; ++c) aj(0, c) = 0.0;
        else
            for (int r = 1; r < n; ++r) aj(r, 0) = 0.0;

        apply_shear(st, static_cast<size_t>(best_j), sign, n);

        GaugeFactor cf;
        cf.kind = GaugeFactor::Kind::Constant;
        cf.constant = T;
        chain.push_left(cf);
        GaugeFactor pf;
        pf.kind = GaugeFactor::Kind::Power;
        pf.point = st.pts[static_cast<size_t>(best_j)];
        pf.exponents.assign(static_cast<size_t>(n), 0);
        pf.exponents[0] = sign;
        chain.push_left(pf);
    }

    ReductionResult out;
    out.steps = steps;
    out.T = std::move(chain);
    out.system.points = st.pts;
    out.system.basepoint = sys.basepoint;
    for (const auto& a : st.res) out.system.parts.push_back({a});
    out.system.poly = st.poly;
    return out;
}

SplittingType splitting_via_reduction(const FuchsianSystem& sys) {
    ReductionResult red = reduce_exponents(sys);
    const int n = sys.dim();
    double rmax = 1.0;
    for (const auto& p : sys.points) rmax = std::max(rmax, std::abs(p));
    const double R = 2.0 * rmax + 1.0;
    const int N = 256;
    UnitCircleGrid grid(N);
    std::vector<Mat> samples;
    samples.reserve(static_cast<size_t>(N));
    for (int k = 0; k < N; ++k) samples.push_back(red.T.evaluate(R * grid.node(k), n));
    LoopSampleOptions lopt;
    lopt.tail_tolerance = 1e-9;
    MatrixLoop tloop = loop_from_samples(samples, lopt);
    SplittingType kt = partial_indices(tloop);
    std::vector<int> k(kt.entries());
    for (auto& e : k) e = -e;
    std::reverse(k.begin(), k.end());
    return SplittingType(std::move(k));
}

// ---------------------------------------------------------------------------
// scalarization

namespace {

using JetList = std::vector<Mat>;  // c[q] = f^{(q)}(z)/q!

JetList coefficient_jet(const RegularSystem& sys, cplx z, int order) {
    const int n = sys.dim();
    JetList jet(static_cast<size_t>(order + 1), Mat::Zero(n, n));
    for (size_t j = 0; j < sys.points.size(); ++j) {
        const cplx d = z - sys.points[j];
        for (size_t k = 1; k <= sys.parts[j].size(); ++k) {
            // d^q/dz^q (z-s)^{-k} / q! = (-1)^q C(k+q-1, q) (z-s)^{-k-q}
            double binom = 1.0;
            for (int q = 0; q <= order; ++q) {
                if (q > 0) binom *= static_cast<double>(k + q - 1) / q;
                const double sgn = (q % 2 == 0) ? 1.0 : -1.0;
                jet[static_cast<size_t>(q)] +=
                    sys.parts[j][k - 1] * (sgn * binom * std::pow(d, -static_cast<double>(k + q)));
            }
        }
    }
    for (size_t p = 0; p < sys.poly.size(); ++p) {
        double binom = 1.0;
        cplx zp = std::pow(z, static_cast<double>(p));
        for (int q = 0; q <= std::min<int>(order, static_cast<int>(p)); ++q) {
            if (q > 0) {
                binom *= static_cast<double>(p - q + 1) / q;
                zp /= z;
            }
            jet[static_cast<size_t>(q)] += sys.poly[p] * (binom * zp);
        }
    }
    return jet;
}

JetList jet_mul(const JetList& a, const JetList& b) {
    JetList out(a.size(), Mat::Zero(a.front().rows(), a.front().cols()));
    for (size_t q = 0; q < out.size(); ++q)
        for (size_t i = 0; i <= q; ++i) out[q] += a[i] * b[q - i];
    return out;
}

JetList jet_der(const JetList& a) {
    JetList out(a.size(), Mat::Zero(a.front().rows(), a.front().cols()));
    for (size_t q = 0; q + 1 < a.size(); ++q) out[q] = static_cast<double>(q + 1) * a[q + 1];
    return out;
}

}  // namespace

WronskianEvaluator::WronskianEvaluator(RegularSystem sys, int row, double rtol)
    : sys_(std::move(sys)), row_(row), rtol_(rtol), anchor_(sys_.basepoint),
      frame_(Mat::Identity(sys_.dim(), sys_.dim())) {
    if (row < 0 || row >= sys_.dim()) throw validation_error("row selection out of range");
}

void WronskianEvaluator::reset() {
    anchor_ = sys_.basepoint;
    frame_ = Mat::Identity(sys_.dim(), sys_.dim());
}

void WronskianEvaluator::march_to(cplx z) {
    if (std::abs(z - anchor_) < 1e-300) return;
    detail::OdeOptions ode;
    ode.rtol = rtol_;
    ode.min_distance = [this](cplx w) {
        double d = 1e300;
        for (const auto& s : sys_.points) d = std::min(d, std::abs(w - s));
        return std::max(d, 1e-12);
    };
    frame_ = detail::transfer_matrix([this](cplx w) { return sys_.coefficient(w); },
                                     detail::line_leg(anchor_, z), sys_.dim(), ode) *
             frame_;
    anchor_ = z;
}

cplx WronskianEvaluator::wronskian_here() const {
    // rows of the Wronskian matrix are e_row^T P_m Phi with P_0 = I and
    // P_{m} = P_{m-1}' + P_{m-1} A, carried as jets at the anchor
    const int n = sys_.dim();
    JetList ajet = coefficient_jet(sys_, anchor_, n);
    JetList pcur(static_cast<size_t>(n + 1), Mat::Zero(n, n));
    pcur[0] = Mat::Identity(n, n);
    Mat w(n, n);
    for (int m = 0; m < n; ++m) {
        if (m > 0) {
            JetList der = jet_der(pcur);
            JetList mul = jet_mul(pcur, ajet);
            for (size_t q = 0; q < pcur.size(); ++q) pcur[q] = der[q] + mul[q];
        }
        w.row(m) = (pcur[0] * frame_).row(row_);
    }
    return w.determinant();
}

cplx WronskianEvaluator::value_at(cplx z) {
    WronskianEvaluator copy = *this;
    copy.march_to(z);
    return copy.wronskian_here();
}

WronskianEvaluator scalarize(const FuchsianSystem& sys, int row) {
    return WronskianEvaluator(to_regular(sys), row);
}

WronskianEvaluator scalarize(const RegularSystem& sys, int row) {
    return WronskianEvaluator(sys, row);
}

int count_wronskian_zeros(WronskianEvaluator& w, double radius,
                          const WronskianCountOptions& opts) {
    const auto& sys = w.system();
    const cplx z0 = sys.basepoint;
    if (std::abs(z0) >= radius)
        throw validation_error("basepoint must lie inside the counting contour");

    // pick a starting direction whose radial exit avoids the marked points
    double best_clear = -1.0;
    double theta_s = 0.0;
    for (int c = 0; c < 32; ++c) {
        const double th = 2.0 * pi * c / 32.0;
        const cplx target = std::polar(radius, th);
        double clear = 1e300;
        for (const auto& s : sys.points) clear = std::min(clear, segment_distance(z0, target, s));
        if (clear > best_clear) {
            best_clear = clear;
            theta_s = th;
        }
    }
    if (best_clear < 1e-6) throw numerical_error("no clear exit ray to the counting contour");

    int K = opts.min_samples;
    double winding = 0.0;
    for (; K <= 8192; K *= 2) {
        w.reset();
        w.march_to(std::polar(radius, theta_s));
        cplx prev = w.wronskian_here();
        double maxstep = 0.0, acc = 0.0, maxw = std::abs(prev);
        if (!(std::abs(prev) > 0)) throw numerical_error("Wronskian vanishes at the contour start");
        for (int k = 1; k <= K; ++k) {
            w.march_to(std::polar(radius, theta_s + 2.0 * pi * k / K));
            const cplx cur = w.wronskian_here();
            if (std::abs(cur) < 1e-12 * std::max(1.0, maxw))
                throw numerical_error("Wronskian vanishes on the counting contour");
            maxw = std::max(maxw, std::abs(cur));
            const double d = std::arg(cur / prev);
            maxstep = std::max(maxstep, std::abs(d));
            acc += d;
            prev = cur;
        }
        winding = acc / (2.0 * pi);
        if (maxstep < 1.0) break;
    }

    // subtract the local orders of W at the enclosed marked points
    double order_sum = 0.0;
    for (size_t j = 0; j < sys.points.size(); ++j) {
        const cplx s = sys.points[j];
        if (std::abs(s) >= radius) continue;
        double dmin = 2.0 * std::abs(z0 - s);
        for (size_t k = 0; k < sys.points.size(); ++k)
            if (k != j) dmin = std::min(dmin, std::abs(sys.points[k] - s));
        const double r0 = 0.25 * dmin;
        double ord = 0.0;
        bool got = false;
        for (int attempt = 0; attempt < 3 && !got; ++attempt) {
            const cplx dir = std::polar(1.0, std::arg(z0 - s) + 0.35 * attempt);
            try {
                w.reset();
                w.march_to(s + r0 * dir);
                std::vector<double> logs;
                double r = r0;
                while (r > r0 * opts.order_fit_shrink) {
                    logs.push_back(std::log(std::abs(w.wronskian_here())));
                    r *= 0.5;
                    w.march_to(s + r * dir);
                }
                logs.push_back(std::log(std::abs(w.wronskian_here())));
                std::vector<double> slopes;
                for (size_t k = 0; k + 1 < logs.size(); ++k)
                    slopes.push_back((logs[k] - logs[k + 1]) / std::log(2.0));
                // iterated Aitken on the slope ladder
                while (slopes.size() >= 3) {
                    std::vector<double> nxt;
                    for (size_t m = 0; m + 2 < slopes.size(); ++m) {
                        const double d1 = slopes[m + 1] - slopes[m];
                        const double d2 = slopes[m + 2] - slopes[m + 1];
                        const double den = d2 - d1;
                        nxt.push_back(std::abs(den) > 1e-14 ? slopes[m + 2] - d2 * d2 / den
                                                            : slopes[m + 2]);
                    }
                    slopes = std::move(nxt);
                    if (slopes.size() <= 3) break;
                }
                ord = slopes.back();
                got = std::isfinite(ord);
            } catch (const numerical_error&) {
                got = false;
            }
        }
        if (!got) throw numerical_error("local order fit at a marked point failed");
        order_sum += ord;
    }

    const double raw = winding - order_sum;
    const long long count = std::llround(raw);
    if (std::abs(raw - static_cast<double>(count)) > 0.1)
        throw numerical_error("apparent singularity count did not converge to an integer");
    if (count < 0) throw numerical_error("negative apparent count; order fits unreliable");
    return static_cast<int>(count);
}

FuchsianSystem fuchsian_from_jumps(const std::vector<cplx>& points,
                                   const std::vector<Mat>& jumps, cplx basepoint) {
    if (points.size() != jumps.size()) throw validation_error("one matrix per point required");
    FuchsianSystem sys;
    sys.points = points;
    sys.basepoint = basepoint;
    for (const auto& g : jumps) sys.residues.push_back(normalized_log(g));
    Mat sum = Mat::Zero(sys.dim(), sys.dim());
    for (const auto& a : sys.residues) sum += a;
    sys.infinity_marked = sum.norm() > 1e-10 * system_scale(sys.residues);
    return sys;
}

bool monodromy_matches_up_to_conjugation(const std::vector<Mat>& computed,
                                         const std::vector<Mat>& expected, double tol) {
    if (computed.size() != expected.size() || computed.empty()) return false;
    const int n = static_cast<int>(computed.front().rows());
    const int m = static_cast<int>(computed.size());
    // solve M_i X - X G_i = 0 for a common intertwiner X
    Mat K = Mat::Zero(m * n * n, n * n);
    for (int i = 0; i < m; ++i)
        for (int c = 0; c < n; ++c)
            for (int r = 0; r < n; ++r) {
                // row index of equation (r, c) in system i
                const int eq = i * n * n + c * n + r;
                for (int k = 0; k < n; ++k) {
                    K(eq, c * n + k) += computed[static_cast<size_t>(i)](r, k);
                    K(eq, k * n + r) -= expected[static_cast<size_t>(i)](k, c);
                }
            }
    Eigen::BDCSVD<Mat> svd(K, Eigen::ComputeThinV);
    Vec x = svd.matrixV().col(n * n - 1);
    Mat X(n, n);
    for (int c = 0; c < n; ++c) X.col(c) = x.segment(c * n, n);
    double resid = 0.0;
    for (int i = 0; i < m; ++i)
        resid = std::max(resid, (computed[static_cast<size_t>(i)] * X -
                                 X * expected[static_cast<size_t>(i)]).norm());
    Eigen::BDCSVD<Mat> xsvd(X);
    const double cond_ok = xsvd.singularValues()(n - 1) > 1e-6 * xsvd.singularValues()(0);
    double scale = 1.0;
    for (const auto& g : computed) scale = std::max(scale, g.norm());
    return resid < tol * scale && cond_ok;
}

}  // namespace rhb
