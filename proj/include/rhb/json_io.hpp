#pragma once

#include <json.hpp>

#include "rhb/birkhoff.hpp"
#include "rhb/fuchsian.hpp"
#include "rhb/loop.hpp"

namespace rhb {

using json = nlohmann::json;

/// Round to the given number of significant digits (12 for all CLI output,
/// which makes reports byte-identical across runs).
double round_sig(double x, int digits = 12);

/// Recursively round every number in a JSON document.
json round_numbers(const json& j, int digits = 12);

json to_json(const Mat& m);
Mat mat_from_json(const json& j, const std::string& where);

json to_json(const MatrixLoop& loop);
MatrixLoop loop_from_json(const json& j);

json to_json(const PiecewiseLoop& loop);
PiecewiseLoop piecewise_from_json(const json& j);

json to_json(const FuchsianSystem& sys);
FuchsianSystem system_from_json(const json& j);

json to_json(const SplittingType& k);
SplittingType splitting_from_json(const json& j);

json to_json(const LeveltEntry& e);
json to_json(const MonodromyRep& rep);

}  // namespace rhb
