#pragma once

// Formant synthesis: glottal pulse train through a cascade of four two-pole
// resonators, shaped by a syllable-structure envelope.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "gestura/acoustics.hpp"
#include "gestura/error.hpp"
#include "gestura/flow.hpp"

namespace gestura {

struct EnvelopeOptions {
  double fall_fraction = 0.25;     ///< of T, on each side of a closure
  double plateau_fraction = 0.1;   ///< of T, zero gain around the marker
};

struct EnvelopeCurve {
  std::vector<double> gain;
  std::size_t size() const { return gain.size(); }
};

/// Gain 1 on vowels, raised-cosine dips to 0 around consonant markers, 0
/// through pauses. Consonants of one segment (a cluster) share a single
/// closure spanning their markers.
inline EnvelopeCurve build_envelope(const std::vector<Marker>& markers, std::size_t n_frames, double dt_ms,
                                    double period_ms, const EnvelopeOptions& opt = {}) {
  if (!(dt_ms > 0.0)) throw Error(ErrorKind::kDomain, "frame period must be positive");
  if (!(period_ms > 0.0)) throw Error(ErrorKind::kDomain, "period T must be positive");
  EnvelopeCurve env;
  env.gain.assign(n_frames, 1.0);
  const auto n = static_cast<long long>(n_frames);
  const long long fall = std::llround(opt.fall_fraction * period_ms / dt_ms);
  const long long plateau = std::llround(opt.plateau_fraction * period_ms / dt_ms);
  const long long lead = std::llround(0.5 * opt.plateau_fraction * period_ms / dt_ms);

  auto lower = [&](long long j, double g) {
    if (j >= 0 && j < n) env.gain[static_cast<std::size_t>(j)] = std::min(env.gain[static_cast<std::size_t>(j)], g);
  };
  auto dip = [&](long long first_marker, long long last_marker) {
    const long long start = first_marker - lead;
    const long long end = last_marker - lead + plateau;  // exclusive
    for (long long j = start; j < end; ++j) lower(j, 0.0);
    for (long long d = 1; d <= fall; ++d) {
      const double g = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(d) /
                                             static_cast<double>(fall + 1)));
      lower(start - d, g);
      lower(end - 1 + d, g);
    }
  };

  for (std::size_t k = 0; k < markers.size(); ++k) {
    const Marker& m = markers[k];
    if (m.kind == MarkerKind::kPause) {
      // Silent until the arrival that ends the pause.
      const std::size_t stop = k + 1 < markers.size() ? markers[k + 1].frame : n_frames;
      for (std::size_t j = m.frame; j < std::min(stop, n_frames); ++j) env.gain[j] = 0.0;
      continue;
    }
    if (m.kind != MarkerKind::kConsonant) continue;
    if (k > 0 && markers[k - 1].kind == MarkerKind::kConsonant && markers[k - 1].segment == m.segment) {
      continue;  // already covered by the cluster's first consonant
    }
    std::size_t last = k;
    while (last + 1 < markers.size() && markers[last + 1].kind == MarkerKind::kConsonant &&
           markers[last + 1].segment == m.segment) {
      ++last;
    }
    dip(static_cast<long long>(m.frame), static_cast<long long>(markers[last].frame));
  }
  return env;
}

struct GlottalOptions {
  double open_quotient = 0.6;
  double rise_fraction = 0.4;  ///< of the period; the fall takes the rest of the open phase
  std::optional<double> f0_end;  ///< linear declination target
};

namespace detail {

inline void check_source(double f0, double sample_rate) {
  if (!(f0 >= 50.0 && f0 <= 400.0)) {
    throw Error(ErrorKind::kDomain, "f0 " + std::to_string(f0) + " Hz outside [50, 400]");
  }
  if (!(sample_rate >= 8000.0)) throw Error(ErrorKind::kDomain, "sample rate must be at least 8000 Hz");
}

inline std::size_t sample_count(double duration_s, double sample_rate) {
  if (!(duration_s >= 0.0)) throw Error(ErrorKind::kDomain, "duration must be non-negative");
  return static_cast<std::size_t>(std::llround(duration_s * sample_rate));
}

/// Cumulative glottal cycles at sample n (closed form for a linear f0 ramp).
inline double cycles_at(std::size_t n, double f0, double f0_end, double duration_s, double sample_rate) {
  const double t = static_cast<double>(n) / sample_rate;
  if (f0_end == f0 || duration_s <= 0.0) return f0 * static_cast<double>(n) / sample_rate;
  return f0 * t + 0.5 * (f0_end - f0) * t * t / duration_s;
}

}  // namespace detail

/// Sample indices where a new glottal cycle begins.
inline std::vector<std::size_t> pulse_onsets(double f0, double duration_s, double sample_rate,
                                             const GlottalOptions& opt = {}) {
  detail::check_source(f0, sample_rate);
  const double f1 = opt.f0_end.value_or(f0);
  if (opt.f0_end) detail::check_source(f1, sample_rate);
  const std::size_t n = detail::sample_count(duration_s, sample_rate);
  std::vector<std::size_t> out;
  double prev = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = std::floor(detail::cycles_at(i, f0, f1, duration_s, sample_rate));
    if (c != prev) out.push_back(i);
    prev = c;
  }
  return out;
}

/// Differentiated Rosenberg pulse train, zero mean.
inline std::vector<double> glottal_source(double f0, double duration_s, double sample_rate,
                                          const GlottalOptions& opt = {}) {
  detail::check_source(f0, sample_rate);
  const double f1 = opt.f0_end.value_or(f0);
  if (opt.f0_end) detail::check_source(f1, sample_rate);
  const std::size_t n = detail::sample_count(duration_s, sample_rate);
  const double tp = opt.rise_fraction;
  const double tn = opt.open_quotient - opt.rise_fraction;
  std::vector<double> out(n);
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = detail::cycles_at(i, f0, f1, duration_s, sample_rate);
    const double x = c - std::floor(c);
    double g = 0.0;
    if (x < tp) {
      const double u = x / tp;
      g = 3.0 * u * u - 2.0 * u * u * u;
    } else if (x < tp + tn) {
      const double u = (x - tp) / tn;
      g = 1.0 - u * u;
    }
    out[i] = g - prev;
    prev = g;
  }
  if (n > 0) {
    double mean = 0.0;
    for (double v : out) mean += v;
    mean /= static_cast<double>(n);
    for (double& v : out) v -= mean;
  }
  return out;
}

struct Waveform {
  std::vector<double> samples;
  double sample_rate = 16000.0;

  double duration_s() const { return static_cast<double>(samples.size()) / sample_rate; }
};

/// y[n] = a x[n] + b y[n-1] + c y[n-2] with unit gain at DC.
struct Resonator {
  double a = 1.0, b = 0.0, c = 0.0;
  double y1 = 0.0, y2 = 0.0;

  void tune(double freq, double bandwidth, double sample_rate) {
    const double r = std::exp(-std::numbers::pi * bandwidth / sample_rate);
    c = -r * r;
    b = 2.0 * r * std::cos(2.0 * std::numbers::pi * freq / sample_rate);
    a = 1.0 - b - c;
  }

  /// Pole radius; below 1 for any positive bandwidth.
  double pole_radius() const { return std::sqrt(-c); }

  double step(double x) {
    const double y = a * x + b * y1 + c * y2;
    y2 = y1;
    y1 = y;
    return y;
  }
};

struct RenderOptions {
  std::array<double, kFormantCount> bandwidths = {60.0, 90.0, 120.0, 150.0};
  GlottalOptions source;
  double peak = 0.9;
};

/// Formants used for a frame: the frame's own when valid, else the last valid
/// ones (the first valid ones before any valid frame, a neutral tube if none).
inline std::vector<std::array<double, kFormantCount>> held_formants(const FormantTrack& track) {
  const std::array<double, kFormantCount> neutral = {500.0, 1500.0, 2500.0, 3500.0};
  std::vector<std::array<double, kFormantCount>> out(track.size(), neutral);
  std::optional<std::array<double, kFormantCount>> last;
  for (std::size_t j = 0; j < track.size(); ++j) {
    if (track.valid[j]) {
      last = track.frames[j];
      break;
    }
  }
  for (std::size_t j = 0; j < track.size(); ++j) {
    if (track.valid[j]) last = track.frames[j];
    if (last) out[j] = *last;
  }
  return out;
}

inline Waveform render(const FormantTrack& track, const EnvelopeCurve& envelope, double f0, double sample_rate,
                       double dt_ms = kDefaultFrameMs, const RenderOptions& opt = {}) {
  if (track.size() != envelope.size() || track.valid.size() != track.size()) {
    throw Error(ErrorKind::kConsistency, "formant track has " + std::to_string(track.size()) +
                                             " frames but the envelope has " + std::to_string(envelope.size()));
  }
  if (!(dt_ms > 0.0)) throw Error(ErrorKind::kDomain, "frame period must be positive");
  for (double bw : opt.bandwidths) {
    if (!(bw > 0.0)) throw Error(ErrorKind::kDomain, "resonator bandwidth must be positive");
  }
  const double duration_s = static_cast<double>(track.size()) * dt_ms / 1000.0;
  Waveform w;
  w.sample_rate = sample_rate;
  std::vector<double> x = glottal_source(f0, duration_s, sample_rate, opt.source);
  const auto formant_of = held_formants(track);
  const std::size_t n_frames = track.size();

  std::array<Resonator, kFormantCount> bank;
  std::size_t tuned_frame = static_cast<std::size_t>(-1);
  w.samples.resize(x.size());
  const double frames_per_sample = 1000.0 / (sample_rate * dt_ms);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double u = static_cast<double>(i) * frames_per_sample;
    const auto j = std::min(static_cast<std::size_t>(u), n_frames - 1);
    if (j != tuned_frame) {
      for (std::size_t k = 0; k < kFormantCount; ++k) bank[k].tune(formant_of[j][k], opt.bandwidths[k], sample_rate);
      tuned_frame = j;
    }
    double y = x[i];
    for (auto& r : bank) y = r.step(y);
    const double frac = u - static_cast<double>(j);
    const double g0 = envelope.gain[j];
    const double g1 = j + 1 < n_frames ? envelope.gain[j + 1] : g0;
    // A closed frame stays closed for its whole duration.
    w.samples[i] = g0 == 0.0 ? 0.0 : y * (g0 + (g1 - g0) * std::min(frac, 1.0));
  }
  double peak = 0.0;
  for (double s : w.samples) peak = std::max(peak, std::abs(s));
  if (peak > 0.0) {
    for (double& s : w.samples) s *= opt.peak / peak;
  }
  return w;
}

}  // namespace gestura
