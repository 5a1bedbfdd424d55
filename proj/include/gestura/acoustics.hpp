#pragma once

// Acoustic stage: articulatory parameters -> area function -> lossless
// chain-matrix transfer function -> formant peaks.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <future>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "gestura/coordination.hpp"
#include "gestura/error.hpp"
#include "gestura/flow.hpp"

namespace gestura {

inline constexpr double kSoundSpeed = 35000.0;  // cm/s
inline constexpr double kAirDensity = 1.14e-3;  // g/cm^3
inline constexpr double kMinArea = 0.05;        // cm^2
inline constexpr double kMaxArea = 15.0;        // cm^2
inline constexpr double kMinSectionLength = 0.05;  // cm
inline constexpr std::size_t kMinSections = 8;
inline constexpr double kMaxFrequency = 5000.0;
inline constexpr std::size_t kFormantCount = 4;

struct TubeSection {
  double length_cm = 0.0;
  double area_cm2 = 0.0;
};

/// Sections listed from glottis to lips.
struct AreaFunction {
  std::vector<TubeSection> sections;

  std::size_t size() const { return sections.size(); }

  double total_length() const {
    double l = 0.0;
    for (const auto& s : sections) l += s.length_cm;
    return l;
  }

  void validate() const {
    if (sections.size() < kMinSections) {
      throw Error(ErrorKind::kDomain, "area function needs at least " +
                                          std::to_string(kMinSections) + " sections");
    }
    for (const auto& s : sections) {
      if (!(s.length_cm > 0.0) || !std::isfinite(s.length_cm)) {
        throw Error(ErrorKind::kDomain, "tube section length must be positive");
      }
      if (!(s.area_cm2 >= kMinArea) || s.area_cm2 > kMaxArea) {
        throw Error(ErrorKind::kDomain, "tube section area " + std::to_string(s.area_cm2) + " cm^2 outside [" +
                                            std::to_string(kMinArea) + ", " + std::to_string(kMaxArea) + "]");
      }
    }
  }

  static AreaFunction uniform(std::size_t sections, double length_cm, double area_cm2) {
    AreaFunction a;
    a.sections.assign(sections, TubeSection{length_cm / static_cast<double>(sections), area_cm2});
    return a;
  }
};

/// Gaussian weight bump along the tract, positions in cm from the glottis.
struct ProfileBump {
  double weight = 0.0;
  double center_cm = 0.0;
  double width_cm = 1.0;
};

/// Simplified articulatory-to-area mapping. Each articulator deforms the
/// neutral tract exponentially, with deviations taken about `reference`.
struct ArticulatoryMap {
  AreaFunction neutral;
  std::array<std::vector<double>, kArticulatorCount> profiles;
  double length_gain = 0.25;         ///< cm per unit of LipP deviation
  std::size_t lip_sections = 3;      ///< sections sharing the length change
  ParameterVector reference = PsiTable::vlam_default().omega();

  void validate() const {
    neutral.validate();
    for (const auto& p : profiles) {
      if (p.size() != neutral.size()) {
        throw Error(ErrorKind::kConfig, "profile length differs from the number of sections");
      }
      for (double w : p) {
        if (!std::isfinite(w) || w < -1.0 || w > 1.0) {
          throw Error(ErrorKind::kConfig, "profile weights must lie in [-1, 1]");
        }
      }
    }
    if (!std::isfinite(length_gain)) throw Error(ErrorKind::kConfig, "length gain must be finite");
    if (lip_sections == 0 || lip_sections > neutral.size()) {
      throw Error(ErrorKind::kConfig, "lip section count out of range");
    }
  }

  /// Section centres in cm from the glottis.
  std::vector<double> centers() const {
    std::vector<double> x;
    double acc = 0.0;
    for (const auto& s : neutral.sections) {
      x.push_back(acc + 0.5 * s.length_cm);
      acc += s.length_cm;
    }
    return x;
  }

  /// Profiles from Gaussian bumps, clipped to [-1, 1].
  static ArticulatoryMap from_bumps(AreaFunction neutral,
                                    const std::array<std::vector<ProfileBump>, kArticulatorCount>& bumps,
                                    double length_gain) {
    ArticulatoryMap m;
    m.neutral = std::move(neutral);
    m.length_gain = length_gain;
    const std::vector<double> x = m.centers();
    for (std::size_t i = 0; i < kArticulatorCount; ++i) {
      m.profiles[i].assign(x.size(), 0.0);
      for (const auto& b : bumps[i]) {
        for (std::size_t k = 0; k < x.size(); ++k) {
          const double u = (x[k] - b.center_cm) / b.width_cm;
          m.profiles[i][k] += b.weight * std::exp(-0.5 * u * u);
        }
      }
      for (double& w : m.profiles[i]) w = std::clamp(w, -1.0, 1.0);
    }
    return m;
  }

  /// 29 sections, 17.5 cm, 3 cm^2 neutral tract.
  static ArticulatoryMap standard() {
    std::array<std::vector<ProfileBump>, kArticulatorCount> bumps = {{
        {{-0.35, 14.0, 3.0}},                     // Jaw: oral cavity
        {{-0.3, 5.0, 2.5}, {0.6, 12.5, 1.8}},     // Body: pharynx vs palate
        {{-0.4, 10.0, 1.5}},                      // Dorsum: velar
        {{-0.3, 15.5, 1.0}},                      // Tip: alveolar
        {{-0.2, 17.2, 0.6}},                      // LipP
        {{0.4, 17.2, 0.6}},                       // LipH: aperture
        {{-0.2, 2.0, 1.5}},                       // Hy
    }};
    return from_bumps(AreaFunction::uniform(29, 17.5, 3.0), bumps, 0.25);
  }
};

inline AreaFunction area_from_parameters(const ParameterVector& p, const ArticulatoryMap& map) {
  const std::size_t m = map.neutral.size();
  ParameterVector d{};
  for (std::size_t i = 0; i < kArticulatorCount; ++i) d[i] = p[i] - map.reference[i];
  AreaFunction out = map.neutral;
  for (std::size_t k = 0; k < m; ++k) {
    double e = 0.0;
    for (std::size_t i = 0; i < kArticulatorCount; ++i) e += map.profiles[i][k] * d[i];
    out.sections[k].area_cm2 = std::clamp(map.neutral.sections[k].area_cm2 * std::exp(e), kMinArea, kMaxArea);
  }
  const double ext = map.length_gain * d[index_of(Articulator::kLipP)];
  for (std::size_t k = m - map.lip_sections; k < m; ++k) {
    out.sections[k].length_cm = std::max(out.sections[k].length_cm + ext / static_cast<double>(map.lip_sections),
                                         kMinSectionLength);
  }
  return out;
}

namespace detail {

inline void check_frequency(double f) {
  if (!(f > 0.0) || f > kMaxFrequency) {
    throw Error(ErrorKind::kDomain, "frequency " + std::to_string(f) + " Hz outside (0, 5000]");
  }
}

// For lossless sections the chain matrix keeps the form [a, jb; jc, d] with
// real a, b, c, d, so the product runs in real arithmetic. Returns d (the
// K22 element); with the lips shorted, U_lips / U_glottis = 1 / K22.
inline double chain_k22(const AreaFunction& area, double f) {
  const double k = 2.0 * std::numbers::pi * f / kSoundSpeed;
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
  for (const auto& s : area.sections) {
    const double z = kAirDensity * kSoundSpeed / s.area_cm2;
    const double cs = std::cos(k * s.length_cm);
    const double sn = std::sin(k * s.length_cm);
    const double na = a * cs - b * sn / z;
    const double nb = a * z * sn + b * cs;
    const double nc = c * cs + d * sn / z;
    const double nd = d * cs - c * z * sn;
    a = na;
    b = nb;
    c = nc;
    d = nd;
  }
  return d;
}

}  // namespace detail

/// |U_lips / U_glottis| on the given grid.
inline std::vector<double> transfer_function(const AreaFunction& area, const std::vector<double>& freqs) {
  if (freqs.empty()) throw Error(ErrorKind::kDomain, "empty frequency grid");
  area.validate();
  std::vector<double> h;
  h.reserve(freqs.size());
  for (double f : freqs) {
    detail::check_frequency(f);
    h.push_back(1.0 / std::abs(detail::chain_k22(area, f)));
  }
  return h;
}

struct FormantOptions {
  std::size_t count = kFormantCount;
  double f_min = 50.0;
  double f_max = kMaxFrequency;
  double step = 10.0;
};

struct FormantSet {
  std::array<double, kFormantCount> f{};  ///< Hz, 0 where not found
  bool valid = false;
};

inline std::vector<double> frequency_grid(const FormantOptions& opt = {}) {
  std::vector<double> g;
  const auto n = static_cast<std::size_t>(std::floor((opt.f_max - opt.f_min) / opt.step + 1e-9)) + 1;
  for (std::size_t j = 0; j < n; ++j) g.push_back(opt.f_min + static_cast<double>(j) * opt.step);
  return g;
}

/// Lowest local maxima of |H|, parabola-refined on log|H|.
inline FormantSet formants(const AreaFunction& area, const FormantOptions& opt = {}) {
  if (opt.count == 0 || opt.count > kFormantCount) {
    throw Error(ErrorKind::kDomain, "formant count must be 1..4");
  }
  area.validate();
  const std::vector<double> grid = frequency_grid(opt);
  std::vector<double> lh(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    detail::check_frequency(grid[j]);
    const double k22 = std::abs(detail::chain_k22(area, grid[j]));
    lh[j] = -std::log(std::max(k22, std::numeric_limits<double>::min()));
  }
  FormantSet out;
  std::size_t found = 0;
  for (std::size_t j = 1; j + 1 < grid.size() && found < opt.count; ++j) {
    if (!(lh[j] > lh[j - 1] && lh[j] >= lh[j + 1])) continue;
    const double den = lh[j - 1] - 2.0 * lh[j] + lh[j + 1];
    double shift = den != 0.0 ? 0.5 * (lh[j - 1] - lh[j + 1]) / den : 0.0;
    shift = std::clamp(shift, -0.5, 0.5);
    out.f[found++] = grid[j] + shift * opt.step;
  }
  out.valid = found == opt.count;
  for (std::size_t i = 1; out.valid && i < found; ++i) {
    if (!(out.f[i] > out.f[i - 1])) out.valid = false;
  }
  return out;
}

inline FormantSet formants_of(const ParameterVector& p, const ArticulatoryMap& map,
                              const FormantOptions& opt = {}) {
  return formants(area_from_parameters(p, map), opt);
}

struct FormantTrack {
  std::vector<std::array<double, kFormantCount>> frames;
  std::vector<bool> valid;

  std::size_t size() const { return frames.size(); }
};

namespace detail {

/// Apply `fn(i)` for i in [0, n), optionally split over `jobs` threads.
/// Each index writes its own slot, so the result is independent of `jobs`.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn fn) {
  if (jobs <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t chunks = std::min<std::size_t>(jobs, n);
  std::vector<std::future<void>> tasks;
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t lo = n * c / chunks;
    const std::size_t hi = n * (c + 1) / chunks;
    tasks.push_back(std::async(std::launch::async, [lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    }));
  }
  for (auto& t : tasks) t.get();
}

}  // namespace detail

inline FormantTrack track_formants(const ParameterFlow& flow, const ArticulatoryMap& map,
                                   unsigned jobs = 1) {
  map.validate();
  FormantTrack track;
  track.frames.resize(flow.size());
  std::vector<char> ok(flow.size(), 0);
  detail::parallel_for(flow.size(), jobs, [&](std::size_t j) {
    const FormantSet fs = formants_of(flow.frames[j], map);
    track.frames[j] = fs.f;
    ok[j] = fs.valid ? 1 : 0;
  });
  track.valid.assign(ok.begin(), ok.end());
  return track;
}

struct SurfacePoint {
  PolarPoint point;
  std::array<double, 3> f{};
  bool valid = false;
};

/// Formants of coordinate(rho, theta) over the product grid, rho-major.
inline std::vector<SurfacePoint> sample_surface(const std::vector<double>& rho_grid,
                                                const std::vector<double>& theta_grid,
                                                const PsiTable& table, const ArticulatoryMap& map,
                                                unsigned jobs = 1) {
  for (double r : rho_grid) {
    if (!(r >= 0.0) || r > 1.0) throw Error(ErrorKind::kDomain, "surface radius outside [0, 1]");
  }
  map.validate();
  std::vector<SurfacePoint> out(rho_grid.size() * theta_grid.size());
  detail::parallel_for(out.size(), jobs, [&](std::size_t k) {
    const PolarPoint pt(rho_grid[k / theta_grid.size()], theta_grid[k % theta_grid.size()]);
    const FormantSet fs = formants_of(coordinate(pt, table), map);
    out[k].point = pt;
    out[k].f = {fs.f[0], fs.f[1], fs.f[2]};
    out[k].valid = fs.valid;
  });
  return out;
}

}  // namespace gestura
