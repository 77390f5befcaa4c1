// JSON report envelope and CSV trajectory serialization.
#pragma once

#include <string>
#include <vector>

#include "cartan/classify.hpp"
#include "cartan/transport.hpp"
#include "json.hpp"

namespace cartan {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "cartan-forge 0.1.0";

// Versioned envelope; results and residuals start empty, wall_time zero.
// Field order is fixed so identical runs emit identical bytes apart from
// the wall_time value.
Json make_envelope(const std::string& spec_name, const std::string& command,
                   Json parameters);

Json to_json(const Vec& v);
Json to_json(const Mat& m);
Json to_json(const T3& t);
Json to_json(const T4& t);
Json to_json(const FrameVerdict& v);

// Fixed column contract: tau, the coordinates in chart order, the
// velocities, then one column per frame component e[mu][a] when frames are
// given. Headers are always written; values carry 17 significant digits.
std::string trajectory_csv(const std::vector<std::string>& coordinates,
                           const Trajectory& curve,
                           const std::vector<Mat>* frames = nullptr);

}  // namespace cartan
