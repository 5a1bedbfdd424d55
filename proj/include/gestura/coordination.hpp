#pragma once

// Coordination function: one point of the complex planning plane drives all
// seven articulators through a per-articulator cosine.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>

#include "gestura/error.hpp"

namespace gestura {

inline constexpr std::size_t kArticulatorCount = 7;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Largest radius of the consonant crown.
inline constexpr double kCrownRadius = 1.2;

enum class Articulator : std::size_t {
  kJaw = 0,
  kBody = 1,
  kDorsum = 2,
  kTip = 3,
  kLipP = 4,
  kLipH = 5,
  kHy = 6,
};

inline constexpr std::array<std::string_view, kArticulatorCount>
    kArticulatorNames = {"Jaw", "Body", "Dorsum", "Tip", "LipP", "LipH", "Hy"};

constexpr std::size_t index_of(Articulator a) {
  return static_cast<std::size_t>(a);
}

using ParameterVector = std::array<double, kArticulatorCount>;
using Complex = std::complex<double>;

inline double canonical_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  // fmod of a value just below a multiple of 2*pi can round up to 2*pi.
  if (t >= kTwoPi) t = 0.0;
  return t;
}

/// A point (rho, theta) of the planning plane. Theta is kept in [0, 2*pi).
class PolarPoint {
 public:
  PolarPoint() = default;
  PolarPoint(double rho, double theta) : rho_(rho), theta_(canonical_angle(theta)) {
    if (!(rho >= 0.0) || !std::isfinite(rho)) {
      std::ostringstream os;
      os << "radius must be finite and non-negative, got " << rho;
      throw Error(ErrorKind::kDomain, os.str());
    }
    if (!std::isfinite(theta)) {
      throw Error(ErrorKind::kDomain, "angle must be finite");
    }
  }

  static PolarPoint from_complex(Complex z) {
    return PolarPoint(std::abs(z), std::arg(z));
  }

  double rho() const { return rho_; }
  double theta() const { return theta_; }
  Complex to_complex() const { return std::polar(rho_, theta_); }

  /// Same angle, radius scaled by `factor` (the anchor construction).
  PolarPoint scaled(double factor) const { return PolarPoint(rho_ * factor, theta_); }

  friend bool operator==(const PolarPoint&, const PolarPoint&) = default;

 private:
  double rho_ = 0.0;
  double theta_ = 0.0;
};

struct PsiEntry {
  double omega = 0.0;  ///< parameter mean
  double psi1 = 0.0;   ///< signed range
  double psi2 = 0.0;   ///< cardinal angle (radians)

  Complex complex_gain() const { return std::polar(psi1, psi2); }
};

/// Seven coordination entries, ordered Jaw, Body, Dorsum, Tip, LipP, LipH, Hy.
struct PsiTable {
  std::array<PsiEntry, kArticulatorCount> entries;

  const PsiEntry& operator[](std::size_t i) const { return entries[i]; }
  const PsiEntry& operator[](Articulator a) const { return entries[index_of(a)]; }

  ParameterVector omega() const {
    ParameterVector out{};
    for (std::size_t i = 0; i < kArticulatorCount; ++i) out[i] = entries[i].omega;
    return out;
  }

  std::array<Complex, kArticulatorCount> complex_gains() const {
    std::array<Complex, kArticulatorCount> out{};
    for (std::size_t i = 0; i < kArticulatorCount; ++i) out[i] = entries[i].complex_gain();
    return out;
  }

  double max_abs_psi1() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, std::abs(e.psi1));
    return m;
  }

  /// The VLAM table: corner vowels /i a u/ sit at 5pi/3, pi, pi/3.
  static PsiTable vlam_default() {
    constexpr double pi = std::numbers::pi;
    return PsiTable{{{
        {0.0, -1.5, pi},
        {0.0, -2.5, 5.0 * pi / 3.0},
        {0.0, 3.0, pi / 3.0},
        {0.0, -3.0, pi},
        {0.0, 3.0, pi / 3.0},
        {0.5, 2.5, pi},
        {0.0, -2.0, pi / 3.0},
    }}};
  }
};

namespace detail {

inline void check_crown(double rho) {
  if (rho > kCrownRadius) {
    std::ostringstream os;
    os.precision(17);
    os << "planning radius " << rho << " lies outside the crown (max "
       << kCrownRadius << ")";
    throw Error(ErrorKind::kDomain, os.str());
  }
}

}  // namespace detail

/// p_i = omega_i + psi1_i * rho * cos(psi2_i - theta).
inline ParameterVector coordinate(const PolarPoint& point,
                                  const PsiTable& table = PsiTable::vlam_default()) {
  detail::check_crown(point.rho());
  ParameterVector p{};
  for (std::size_t i = 0; i < kArticulatorCount; ++i) {
    const PsiEntry& e = table[i];
    p[i] = e.omega + e.psi1 * point.rho() * std::cos(e.psi2 - point.theta());
  }
  return p;
}

/// Complex form: p = omega + Re[psi * conj(z)].
inline ParameterVector coordinate_complex(Complex z,
                                          const PsiTable& table = PsiTable::vlam_default()) {
  detail::check_crown(std::abs(z));
  ParameterVector p{};
  const Complex zc = std::conj(z);
  for (std::size_t i = 0; i < kArticulatorCount; ++i) {
    p[i] = table[i].omega + (table[i].complex_gain() * zc).real();
  }
  return p;
}

}  // namespace gestura
