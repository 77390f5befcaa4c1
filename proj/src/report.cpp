#include "cartan/report.hpp"

#include <sstream>

namespace cartan {

Json make_envelope(const std::string& spec_name, const std::string& command,
                   Json parameters) {
  Json env;
  env["schema"] = 1;
  env["tool_version"] = kToolVersion;
  env["spec_name"] = spec_name;
  env["command"] = command;
  env["parameters"] = std::move(parameters);
  env["results"] = Json::object();
  env["residuals"] = Json::object();
  env["wall_time"] = 0.0;
  return env;
}

Json to_json(const Vec& v) {
  Json out = Json::array();
  for (double c : v) out.push_back(c);
  return out;
}

Json to_json(const Mat& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(const T3& t) {
  const std::size_t n = t.dim();
  Json out = Json::array();
  for (std::size_t i = 0; i < n; ++i) {
    Json plane = Json::array();
    for (std::size_t j = 0; j < n; ++j) {
      Json row = Json::array();
      for (std::size_t k = 0; k < n; ++k) row.push_back(t(i, j, k));
      plane.push_back(std::move(row));
    }
    out.push_back(std::move(plane));
  }
  return out;
}

Json to_json(const T4& t) {
  const std::size_t n = t.dim();
  Json out = Json::array();
  for (std::size_t i = 0; i < n; ++i) {
    Json block = Json::array();
    for (std::size_t j = 0; j < n; ++j) {
      Json plane = Json::array();
      for (std::size_t k = 0; k < n; ++k) {
        Json row = Json::array();
        for (std::size_t l = 0; l < n; ++l) row.push_back(t(i, j, k, l));
        plane.push_back(std::move(row));
      }
      block.push_back(std::move(plane));
    }
    out.push_back(std::move(block));
  }
  return out;
}

Json to_json(const FrameVerdict& v) {
  Json out;
  out["predicate"] = v.predicate;
  out["holds"] = v.holds;
  Json res = Json::object();
  for (const auto& [name, value] : v.residuals) res[name] = value;
  out["residuals"] = std::move(res);
  out["tolerance"] = v.tolerance;
  return out;
}

std::string trajectory_csv(const std::vector<std::string>& coordinates,
                           const Trajectory& curve,
                           const std::vector<Mat>* frames) {
  const std::size_t n = coordinates.size();
  std::ostringstream out;
  out << "tau";
  for (const std::string& c : coordinates) out << "," << c;
  for (const std::string& c : coordinates) out << ",v_" << c;
  if (frames)
    for (std::size_t mu = 0; mu < n; ++mu)
      for (std::size_t a = 0; a < n; ++a) out << ",e[" << mu << "][" << a << "]";
  out << "\n";

  for (std::size_t k = 0; k < curve.points.size(); ++k) {
    const TrajectoryPoint& p = curve.points[k];
    out << format_double(p.tau);
    for (std::size_t mu = 0; mu < n; ++mu) out << "," << format_double(p.x[mu]);
    for (std::size_t mu = 0; mu < n; ++mu) out << "," << format_double(p.v[mu]);
    if (frames)
      for (std::size_t mu = 0; mu < n; ++mu)
        for (std::size_t a = 0; a < n; ++a)
          out << "," << format_double((*frames)[k](mu, a));
    out << "\n";
  }
  return out.str();
}

}  // namespace cartan
