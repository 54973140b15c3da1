#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace wlb {

// One evaluation's fidelity: either a discrete level 0..4 or a continuous
// scalar in [0,1]; both map to an inner-solver tolerance. Level 0 is the
// cheapest (loosest) setting, 4 / 1.0 the most accurate.
struct FidelitySpec {
  enum class Kind { discrete, continuous };
  Kind kind = Kind::discrete;
  int level = 4;         // meaningful when kind == discrete
  double continuous = 1.0;  // meaningful when kind == continuous

  static FidelitySpec at_level(int level) {
    return {Kind::discrete, level, 0.0};
  }
  static FidelitySpec at_continuous(double l) {
    return {Kind::continuous, 0, l};
  }
};

inline constexpr std::array<double, 5> kDiscreteTolerances{0.2, 1e-1, 1e-2,
                                                           1e-3, 1e-4};

// Tolerance at a discrete level.
inline double fidelity_from_resource(int level) {
  if (level < 0 || level >= static_cast<int>(kDiscreteTolerances.size())) {
    throw std::out_of_range("fidelity level must be in 0..4");
  }
  return kDiscreteTolerances[static_cast<std::size_t>(level)];
}

// Tolerance on the continuous scale: log-linear between the loosest and
// tightest discrete tolerances, so tol(0)=0.2 and tol(1)=1e-4.
inline double fidelity_from_resource(double l) {
  if (!(l >= 0.0 && l <= 1.0)) {
    throw std::out_of_range("continuous fidelity must be in [0,1]");
  }
  return std::exp((1.0 - l) * std::log(kDiscreteTolerances.front()) +
                  l * std::log(kDiscreteTolerances.back()));
}

inline double tolerance_of(const FidelitySpec& f) {
  return f.kind == FidelitySpec::Kind::discrete
             ? fidelity_from_resource(f.level)
             : fidelity_from_resource(f.continuous);
}

// Continuous coordinate whose tolerance equals `tol` (clamped to the valid
// band); used when recording evaluations driven directly by a tolerance.
inline double fidelity_coordinate_for_tolerance(double tol) {
  const double lo = std::log(kDiscreteTolerances.front());
  const double hi = std::log(kDiscreteTolerances.back());
  const double l = (std::log(tol) - lo) / (hi - lo);
  return std::clamp(l, 0.0, 1.0);
}

// Which tolerances a benchmark exposes; the default discrete ladder is what
// multi-fidelity optimizers consume.
struct FidelitySchedule {
  enum class Kind { discrete, continuous };
  Kind kind = Kind::discrete;

  int n_levels() const { return static_cast<int>(kDiscreteTolerances.size()); }
  FidelitySpec highest() const {
    return kind == Kind::discrete ? FidelitySpec::at_level(n_levels() - 1)
                                  : FidelitySpec::at_continuous(1.0);
  }
};

}  // namespace wlb
