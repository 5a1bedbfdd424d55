#pragma once

// Planning arcs between two points of the complex plane.
//
//   z(t) = (1 - rho(t)) p1 + rho(t) |p2| exp(i (arg p2 + nu/K theta(t)))
//
// with rho(t) = cos(theta(t) / 2). Orientation O1 runs theta from 0 to pi and
// starts at p2; orientation O2 runs theta from -pi to 0 and starts at p1.
// The graph layer always speaks in from/to terms: O1 binds p2 := from and
// p1 := to, O2 binds p1 := from and p2 := to. Either way z(0) == from and
// z(nT) == to. An arc whose endpoints coincide stays put.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gestura/coordination.hpp"
#include "gestura/error.hpp"

namespace gestura {

enum class Orientation {
  kO1,  ///< slow departure, fast arrival
  kO2,  ///< fast departure, slow arrival
};

inline constexpr double kVowelArcShape = 30.0;
inline constexpr double kConsonantArcShape = 10.0;

struct ArcSpec {
  PolarPoint from_point;
  PolarPoint to_point;
  Orientation orientation = Orientation::kO2;
  int n_periods = 1;
  double period_ms = 100.0;
  int nu = 1;
  double shape_k = kVowelArcShape;

  double duration_ms() const { return n_periods * period_ms; }

  void validate() const {
    if (n_periods < 1) throw Error(ErrorKind::kDomain, "arc needs at least one period");
    if (!(period_ms > 0.0)) throw Error(ErrorKind::kDomain, "arc period must be positive");
    if (nu != 1 && nu != -1) throw Error(ErrorKind::kDomain, "arc nu must be +1 or -1");
    if (!(shape_k > 0.0)) throw Error(ErrorKind::kDomain, "arc shape K must be positive");
  }
};

struct Phase {
  double theta = 0.0;
  double rho = 1.0;
};

namespace detail {

inline void check_time(double t, const ArcSpec& arc) {
  const double total = arc.duration_ms();
  if (!(t >= 0.0) || t > total) {
    std::ostringstream os;
    os << "time " << t << " ms outside arc span [0, " << total << "]";
    throw Error(ErrorKind::kRange, os.str());
  }
}

// The velocity profile at the half-open ends is pinned to its exact limit so
// that consecutive arcs meet bitwise at shared nodes.
inline Phase phase_unchecked(double t, const ArcSpec& arc) {
  constexpr double pi = std::numbers::pi;
  const double total = arc.duration_ms();
  Phase ph;
  if (arc.orientation == Orientation::kO1) {
    ph.theta = pi * t / total;
    ph.rho = (t >= total) ? 0.0 : std::cos(ph.theta / 2.0);
  } else {
    ph.theta = pi * (t / total - 1.0);
    ph.rho = (t <= 0.0) ? 0.0 : std::cos(ph.theta / 2.0);
  }
  return ph;
}

inline Complex arc_position_unchecked(double t, const ArcSpec& arc) {
  // Coincident endpoints describe a held position; the spiral term would
  // otherwise wander away from it and back.
  if (arc.from_point == arc.to_point) return arc.from_point.to_complex();
  const Phase ph = phase_unchecked(t, arc);
  const bool o1 = arc.orientation == Orientation::kO1;
  const PolarPoint& p1 = o1 ? arc.to_point : arc.from_point;
  const PolarPoint& p2 = o1 ? arc.from_point : arc.to_point;
  const double spiral = static_cast<double>(arc.nu) / arc.shape_k * ph.theta;
  return (1.0 - ph.rho) * p1.to_complex() +
         ph.rho * std::polar(p2.rho(), p2.theta() + spiral);
}

}  // namespace detail

inline Phase phase(double t, const ArcSpec& arc) {
  arc.validate();
  detail::check_time(t, arc);
  return detail::phase_unchecked(t, arc);
}

inline Complex arc_position(double t, const ArcSpec& arc) {
  arc.validate();
  detail::check_time(t, arc);
  return detail::arc_position_unchecked(t, arc);
}

/// z(0), z(dt), ..., z(nT); the last step is shortened when dt does not
/// divide the arc duration.
inline std::vector<Complex> sample_arc(const ArcSpec& arc, double dt) {
  if (!(dt > 0.0)) {
    std::ostringstream os;
    os << "sampling step must be positive, got " << dt;
    throw Error(ErrorKind::kDomain, os.str());
  }
  arc.validate();
  const double total = arc.duration_ms();
  // Tolerate rounding noise in total/dt before taking the ceiling.
  const double steps = total / dt;
  const auto count = static_cast<std::size_t>(std::ceil(steps - 1e-9));
  std::vector<Complex> out;
  out.reserve(count + 1);
  for (std::size_t j = 0; j < count; ++j) {
    out.push_back(detail::arc_position_unchecked(static_cast<double>(j) * dt, arc));
  }
  out.push_back(detail::arc_position_unchecked(total, arc));
  return out;
}

}  // namespace gestura
