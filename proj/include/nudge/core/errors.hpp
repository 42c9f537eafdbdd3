#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nudge {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A field or solver state contains NaN or Inf.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// The adaptive integrator could not find an acceptable step.
class StiffnessError : public Error {
 public:
  StiffnessError(const std::string& label, double t, double h)
      : Error("step size underflow in '" + label + "' at t=" + std::to_string(t) +
              " (h=" + std::to_string(h) + "); problem is too stiff for explicit stepping"),
        time_(t) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Interpolation system could not be built (duplicate sensors, singular kernel).
class InterpolationError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration; `path()` is the JSON path of the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)), message_(message) {}
  const std::string& path() const noexcept { return path_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string path_;
  std::string message_;
};

struct ConfigIssue {
  std::string path;
  std::string message;
};

/// Every problem found while validating one configuration.
class ConfigErrors : public Error {
 public:
  explicit ConfigErrors(std::vector<ConfigIssue> issues) : Error(join(issues)), issues_(std::move(issues)) {}
  ConfigErrors(const std::string& path, const std::string& message)
      : ConfigErrors(std::vector<ConfigIssue>{{path, message}}) {}
  const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

 private:
  static std::string join(const std::vector<ConfigIssue>& issues) {
    std::string s;
    for (const auto& i : issues) s += (s.empty() ? "" : "\n") + i.path + ": " + i.message;
    return s;
  }
  std::vector<ConfigIssue> issues_;
};

}  // namespace nudge
