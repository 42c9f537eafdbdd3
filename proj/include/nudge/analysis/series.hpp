#pragma once

#include <cmath>
#include <vector>

#include "nudge/core/errors.hpp"

namespace nudge {

/// E(t_i) = |u - v| at the output times.
struct ErrorSeries {
  std::vector<double> times;
  std::vector<double> errors;

  std::size_t size() const noexcept { return times.size(); }

  void push_back(double t, double e) {
    times.push_back(t);
    errors.push_back(e);
  }

  void validate() const {
    if (times.size() != errors.size()) throw Error("ErrorSeries: times and errors differ in length");
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (!std::isfinite(times[i]) || !std::isfinite(errors[i])) throw NonFiniteError("ErrorSeries: non-finite entry");
      if (errors[i] < 0.0) throw Error("ErrorSeries: negative error");
      if (i > 0 && !(times[i] > times[i - 1])) throw Error("ErrorSeries: times must increase");
    }
  }
};

}  // namespace nudge
