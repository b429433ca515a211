#include "rhb/json_io.hpp"

#include <cmath>

namespace rhb {

double round_sig(double x, int digits) {
    if (x == 0.0 || !std::isfinite(x)) return x == 0.0 ? 0.0 : x;
    const double mag = std::pow(10.0, digits - 1 - static_cast<int>(std::floor(std::log10(std::abs(x)))));
    double r = std::round(x * mag) / mag;
    if (r == 0.0) r = 0.0;  // normalize -0
    return r;
}

json round_numbers(const json& j, int digits) {
    if (j.is_number_float()) return round_sig(j.get<double>(), digits);
    if (j.is_array()) {
        json out = json::array();
        for (const auto& e : j) out.push_back(round_numbers(e, digits));
        return out;
    }
    if (j.is_object()) {
        json out = json::object();
        for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = round_numbers(it.value(), digits);
        return out;
    }
    return j;
}

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw validation_error("schema violation at " + where + ": " + what);
}

}  // namespace

json to_json(const Mat& m) {
    json re = json::array(), im = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json rr = json::array(), ri = json::array();
        for (int c = 0; c < m.cols(); ++c) {
            rr.push_back(m(r, c).real());
            ri.push_back(m(r, c).imag());
        }
        re.push_back(rr);
        im.push_back(ri);
    }
    return json{{"re", re}, {"im", im}};
}

Mat mat_from_json(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("re")) bad(where, "expected an object with \"re\" (and optional \"im\")");
    const auto& re = j["re"];
    if (!re.is_array() || re.empty()) bad(where + "/re", "expected a nonempty row array");
    const int rows = static_cast<int>(re.size());
    const int cols = static_cast<int>(re[0].size());
    Mat m = Mat::Zero(rows, cols);
    for (int r = 0; r < rows; ++r) {
        if (static_cast<int>(re[static_cast<size_t>(r)].size()) != cols) bad(where + "/re", "ragged rows");
        for (int c = 0; c < cols; ++c)
            m(r, c) = re[static_cast<size_t>(r)][static_cast<size_t>(c)].get<double>();
    }
    if (j.contains("im")) {
        const auto& im = j["im"];
        if (static_cast<int>(im.size()) != rows) bad(where + "/im", "row count differs from re");
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
                m(r, c) += iu * im[static_cast<size_t>(r)][static_cast<size_t>(c)].get<double>();
    }
    return m;
}

json to_json(const MatrixLoop& loop) {
    json coeffs = json::array();
    for (const auto& [e, a] : loop.coeffs()) {
        json c = to_json(a);
        c["exp"] = e;
        coeffs.push_back(c);
    }
    return json{{"n", loop.size()}, {"coeffs", coeffs}, {"grid", loop.grid_size()}};
}

MatrixLoop loop_from_json(const json& j) {
    if (!j.contains("n")) bad("/", "missing \"n\"");
    const int n = j["n"].get<int>();
    if (!j.contains("coeffs") || !j["coeffs"].is_array()) bad("/coeffs", "missing coefficient array");
    std::map<int, Mat> coeffs;
    int span = 0;
    size_t idx = 0;
    for (const auto& c : j["coeffs"]) {
        const std::string where = "/coeffs/" + std::to_string(idx++);
        if (!c.contains("exp")) bad(where, "missing \"exp\"");
        const int e = c["exp"].get<int>();
        Mat a = mat_from_json(c, where);
        if (a.rows() != n || a.cols() != n) bad(where, "matrix is not n x n");
        coeffs[e] = a;
        span = std::max(span, std::abs(e));
    }
    int grid = j.value("grid", 0);
    if (grid == 0) {
        grid = 64;
        while (grid < 4 * span + 4) grid *= 2;
    }
    return MatrixLoop(n, std::move(coeffs), grid);
}

json to_json(const PiecewiseLoop& loop) {
    json jumps = json::array();
    for (int j = 0; j < loop.jump_count(); ++j) {
        const cplx s = loop.jump_points()[static_cast<size_t>(j)];
        jumps.push_back(json{{"s_re", s.real()},
                             {"s_im", s.imag()},
                             {"plus", to_json(loop.limit_plus(j))},
                             {"minus", to_json(loop.limit_minus(j))}});
    }
    json pieces = json::array();
    for (const auto& p : loop.pieces()) pieces.push_back(to_json(p));
    return json{{"n", loop.size()}, {"jumps", jumps}, {"pieces", pieces}};
}

PiecewiseLoop piecewise_from_json(const json& j) {
    if (!j.contains("pieces") || !j["pieces"].is_array() || j["pieces"].empty())
        bad("/pieces", "missing per-arc pieces");
    std::vector<MatrixLoop> pieces;
    for (const auto& p : j["pieces"]) pieces.push_back(loop_from_json(p));
    std::vector<cplx> jumps;
    if (j.contains("jumps")) {
        size_t idx = 0;
        for (const auto& jm : j["jumps"]) {
            const std::string where = "/jumps/" + std::to_string(idx++);
            if (!jm.contains("s_re") || !jm.contains("s_im")) bad(where, "missing s_re/s_im");
            jumps.emplace_back(jm["s_re"].get<double>(), jm["s_im"].get<double>());
        }
    }
    PiecewiseLoop loop(jumps, pieces);
    // declared one-sided limits, when present, must match the pieces
    if (j.contains("jumps")) {
        size_t idx = 0;
        for (const auto& jm : j["jumps"]) {
            const std::string where = "/jumps/" + std::to_string(idx);
            if (jm.contains("plus")) {
                Mat declared = mat_from_json(jm["plus"], where + "/plus");
                if ((declared - loop.limit_plus(static_cast<int>(idx))).norm() >
                    1e-8 * (1.0 + declared.norm()))
                    bad(where + "/plus", "declared limit disagrees with the pieces");
            }
            if (jm.contains("minus")) {
                Mat declared = mat_from_json(jm["minus"], where + "/minus");
                if ((declared - loop.limit_minus(static_cast<int>(idx))).norm() >
                    1e-8 * (1.0 + declared.norm()))
                    bad(where + "/minus", "declared limit disagrees with the pieces");
            }
            ++idx;
        }
    }
    return loop;
}

json to_json(const FuchsianSystem& sys) {
    json points = json::array();
    json residues = json::array();
    for (size_t i = 0; i < sys.points.size(); ++i) {
        points.push_back(json{{"re", sys.points[i].real()}, {"im", sys.points[i].imag()}});
        residues.push_back(to_json(sys.residues[i]));
    }
    if (sys.infinity_marked) {
        points.push_back("inf");
        residues.push_back(to_json(sys.residue_at_infinity()));
    }
    return json{{"points", points},
                {"residues", residues},
                {"basepoint", json{{"re", sys.basepoint.real()}, {"im", sys.basepoint.imag()}}}};
}

FuchsianSystem system_from_json(const json& j) {
    if (!j.contains("points") || !j.contains("residues")) bad("/", "missing points or residues");
    const auto& pts = j["points"];
    const auto& res = j["residues"];
    if (pts.size() != res.size()) bad("/residues", "count differs from points");
    FuchsianSystem sys;
    Mat inf_residue;
    bool has_inf = false;
    for (size_t i = 0; i < pts.size(); ++i) {
        const std::string where = "/points/" + std::to_string(i);
        if (pts[i].is_string()) {
            if (pts[i].get<std::string>() != "inf") bad(where, "only \"inf\" is a valid string point");
            if (has_inf) bad(where, "infinity marked twice");
            has_inf = true;
            inf_residue = mat_from_json(res[i], "/residues/" + std::to_string(i));
            continue;
        }
        if (!pts[i].contains("re") || !pts[i].contains("im")) bad(where, "expected {re, im} or \"inf\"");
        sys.points.emplace_back(pts[i]["re"].get<double>(), pts[i]["im"].get<double>());
        sys.residues.push_back(mat_from_json(res[i], "/residues/" + std::to_string(i)));
    }
    sys.infinity_marked = has_inf;
    if (j.contains("basepoint"))
        sys.basepoint = cplx(j["basepoint"]["re"].get<double>(), j["basepoint"]["im"].get<double>());
    else {
        double rmax = 0.0;
        for (const auto& s : sys.points) rmax = std::max(rmax, std::abs(s));
        sys.basepoint = cplx(-2.0 * std::max(rmax, 1.0), 0.0);
    }
    if (has_inf) {
        const Mat implied = sys.residue_at_infinity();
        if ((implied - inf_residue).norm() > 1e-8 * (1.0 + implied.norm()))
            bad("/residues", "residue at infinity must equal minus the sum of the finite residues");
    }
    return sys;
}

json to_json(const SplittingType& k) {
    return json{{"K", k.entries()}};
}

SplittingType splitting_from_json(const json& j) {
    const json* arr = nullptr;
    if (j.is_array()) arr = &j;
    else if (j.contains("K")) arr = &j["K"];
    else bad("/", "expected an integer array or {\"K\": [...]}");
    std::vector<int> k;
    for (const auto& e : *arr) {
        if (!e.is_number_integer()) bad("/K", "entries must be integers");
        k.push_back(e.get<int>());
    }
    return SplittingType(std::move(k));
}

json to_json(const LeveltEntry& e) {
    json mu = json::array(), beta = json::array();
    for (size_t i = 0; i < e.mu.size(); ++i) {
        mu.push_back(json{{"re", e.mu[i].real()}, {"im", e.mu[i].imag()}});
        beta.push_back(json{{"re", e.beta[i].real()}, {"im", e.beta[i].imag()}});
    }
    json out{{"phi", e.phi}, {"mu", mu}, {"beta", beta}};
    if (e.at_infinity) out["point"] = "inf";
    else out["point"] = json{{"re", e.point.real()}, {"im", e.point.imag()}};
    return out;
}

json to_json(const MonodromyRep& rep) {
    json gens = json::array();
    for (size_t i = 0; i < rep.generators.size(); ++i) {
        json g = to_json(rep.generators[i]);
        g["point_index"] = rep.point_index[i];
        gens.push_back(g);
    }
    return json{{"generators", gens},
                {"relation_defect", rep.relation_defect},
                {"basepoint", json{{"re", rep.basepoint.real()}, {"im", rep.basepoint.imag()}}}};
}

}  // namespace rhb
