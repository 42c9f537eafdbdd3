#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "nudge/core/errors.hpp"
#include "nudge/interp/halton.hpp"

namespace nudge {

enum class InterpMethod { Linear, CubicSpline, RbfWendlandC2 };

inline std::string to_string(InterpMethod m) {
  switch (m) {
    case InterpMethod::Linear: return "linear";
    case InterpMethod::CubicSpline: return "spline";
    case InterpMethod::RbfWendlandC2: return "rbf";
  }
  return "?";
}

inline InterpMethod parse_interp_method(const std::string& s) {
  if (s == "linear") return InterpMethod::Linear;
  if (s == "spline") return InterpMethod::CubicSpline;
  if (s == "rbf") return InterpMethod::RbfWendlandC2;
  throw Error("unknown interpolation method '" + s + "' (linear, spline, rbf)");
}

/// Wraps x into [0, length).
inline double wrap_periodic(double x, double length) noexcept {
  double r = std::fmod(x, length);
  if (r < 0.0) r += length;
  if (r >= length) r -= length;
  return r;
}

/// Fixed sensors on a periodic interval [0, length). Points are kept sorted;
/// observation vectors follow that order.
class Network1D {
 public:
  Network1D(std::vector<double> points, double length, InterpMethod method)
      : points_(std::move(points)), length_(length), method_(method) {
    if (!(length_ > 0.0)) throw Error("Network1D: length must be positive");
    if (method_ == InterpMethod::RbfWendlandC2) throw Error("Network1D: rbf interpolation is 2D only");
    if (points_.empty()) throw Error("Network1D: no sensors");
    if (method_ == InterpMethod::CubicSpline && points_.size() < 3)
      throw Error("Network1D: periodic spline needs at least 3 sensors");
    for (double p : points_)
      if (!(p >= 0.0 && p < length_)) throw Error("Network1D: sensor outside [0, length)");
    std::sort(points_.begin(), points_.end());
    for (std::size_t i = 1; i < points_.size(); ++i)
      if (points_[i] - points_[i - 1] <= 1e-12 * length_) throw InterpolationError("Network1D: duplicate sensors");
    if (points_.size() > 1 && points_.front() + length_ - points_.back() <= 1e-12 * length_)
      throw InterpolationError("Network1D: duplicate sensors across the periodic seam");
  }

  const std::vector<double>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  double length() const noexcept { return length_; }
  InterpMethod method() const noexcept { return method_; }

  /// Largest gap between cyclically adjacent sensors.
  double h() const noexcept {
    double g = points_.front() + length_ - points_.back();
    for (std::size_t i = 1; i < points_.size(); ++i) g = std::max(g, points_[i] - points_[i - 1]);
    return g;
  }

  /// Gap from sensor k to its cyclic successor.
  double gap(std::size_t k) const noexcept {
    return k + 1 < points_.size() ? points_[k + 1] - points_[k] : points_.front() + length_ - points_[k];
  }

 private:
  std::vector<double> points_;
  double length_;
  InterpMethod method_;
};

/// Scattered sensors on the periodic rectangle [0,lx) x [0,ly), interpolated
/// with a compactly supported Wendland C2 kernel of radius rho*h.
class Network2D {
 public:
  Network2D(std::vector<Point2> points, double lx, double ly, double rho)
      : points_(std::move(points)), lx_(lx), ly_(ly), rho_(rho) {
    if (!(lx_ > 0.0 && ly_ > 0.0)) throw Error("Network2D: domain must be positive");
    if (points_.empty()) throw Error("Network2D: no sensors");
    if (!(rho_ >= 1.0 && rho_ <= 10.0)) throw Error("Network2D: rho must lie in [1, 10]");
    for (const auto& p : points_)
      if (!(p.x >= 0.0 && p.x < lx_ && p.y >= 0.0 && p.y < ly_))
        throw Error("Network2D: sensor outside the domain");
    auto sorted = points_;
    std::sort(sorted.begin(), sorted.end(), [](auto a, auto b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InterpolationError("Network2D: duplicate sensors");
  }

  const std::vector<Point2>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  double lx() const noexcept { return lx_; }
  double ly() const noexcept { return ly_; }
  double rho() const noexcept { return rho_; }
  InterpMethod method() const noexcept { return InterpMethod::RbfWendlandC2; }

  /// sqrt(area / Ns); equals side/sqrt(Ns) on a square domain.
  double h() const noexcept { return std::sqrt(lx_ * ly_ / static_cast<double>(points_.size())); }
  double support_radius() const noexcept { return rho_ * h(); }

 private:
  std::vector<Point2> points_;
  double lx_, ly_, rho_;
};

using ObservationNetwork = std::variant<Network1D, Network2D>;

/// Sensors at k*length/ns, k = 0..ns-1.
inline Network1D equispaced_network(std::size_t ns, double length, InterpMethod method) {
  std::vector<double> pts(ns);
  for (std::size_t k = 0; k < ns; ++k) pts[k] = length * static_cast<double>(k) / static_cast<double>(ns);
  return Network1D(std::move(pts), length, method);
}

inline Network2D halton_network(std::size_t ns, double lx, double ly, double rho) {
  return Network2D(halton_points_2d(ns, lx, ly), lx, ly, rho);
}

inline double network_h(const ObservationNetwork& n) {
  return std::visit([](const auto& x) { return x.h(); }, n);
}
inline std::size_t network_size(const ObservationNetwork& n) {
  return std::visit([](const auto& x) { return x.size(); }, n);
}

// JSON: {"points": [[x],...] | [[x,y],...], "method": ..., "rho": ..., "domain": [L] | [lx, ly]}
inline nlohmann::json to_json(const ObservationNetwork& net) {
  nlohmann::json j;
  if (const auto* n1 = std::get_if<Network1D>(&net)) {
    j["points"] = nlohmann::json::array();
    for (double p : n1->points()) j["points"].push_back({p});
    j["method"] = to_string(n1->method());
    j["domain"] = {n1->length()};
  } else {
    const auto& n2 = std::get<Network2D>(net);
    j["points"] = nlohmann::json::array();
    for (const auto& p : n2.points()) j["points"].push_back({p.x, p.y});
    j["method"] = "rbf";
    j["rho"] = n2.rho();
    j["domain"] = {n2.lx(), n2.ly()};
  }
  return j;
}

/// `domain` supplies the periodic extent when the document has no "domain" key.
inline ObservationNetwork network_from_json(const nlohmann::json& j, std::vector<double> domain = {}) {
  if (!j.is_object()) throw ConfigError("network", "must be an object");
  if (j.contains("domain")) domain = j.at("domain").get<std::vector<double>>();
  if (!j.contains("points") || !j["points"].is_array() || j["points"].empty())
    throw ConfigError("network.points", "must be a non-empty array");
  const std::string method = j.value("method", std::string("linear"));
  const auto& pts = j["points"];
  const std::size_t dim = pts[0].is_array() ? pts[0].size() : 1;
  if (dim == 1) {
    if (domain.size() != 1) throw ConfigError("network.domain", "1D network needs [length]");
    std::vector<double> xs;
    for (const auto& p : pts) xs.push_back(p.is_array() ? p.at(0).get<double>() : p.get<double>());
    return Network1D(std::move(xs), domain[0], parse_interp_method(method));
  }
  if (dim != 2) throw ConfigError("network.points", "points must have 1 or 2 coordinates");
  if (domain.size() != 2) throw ConfigError("network.domain", "2D network needs [lx, ly]");
  if (method != "rbf") throw ConfigError("network.method", "2D networks use rbf interpolation");
  std::vector<Point2> ps;
  for (const auto& p : pts) ps.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return Network2D(std::move(ps), domain[0], domain[1], j.value("rho", 5.0));
}

}  // namespace nudge
