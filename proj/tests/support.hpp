#pragma once

// Independent oracles and helpers shared by the test binaries.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sys/wait.h>
#include <string>
#include <vector>

#include "gestura/gestura.hpp"

namespace testing_support {

using namespace gestura;
inline constexpr double kPi = std::numbers::pi;

/// Cosine coordination map written out by hand, independent of PsiTable.
inline ParameterVector closed_form(double rho, double theta) {
  const std::array<double, 7> omega = {0, 0, 0, 0, 0, 0.5, 0};
  const std::array<double, 7> psi1 = {-1.5, -2.5, 3, -3, 3, 2.5, -2};
  const std::array<double, 7> psi2 = {kPi, 5 * kPi / 3, kPi / 3, kPi, kPi / 3, kPi, kPi / 3};
  ParameterVector p{};
  for (int i = 0; i < 7; ++i) p[i] = omega[i] + psi1[i] * rho * std::cos(psi2[i] - theta);
  return p;
}

inline double max_abs_diff(const ParameterVector& a, const ParameterVector& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Distance from z to the segment [a, b].
inline double chord_distance(std::complex<double> z, std::complex<double> a, std::complex<double> b) {
  const std::complex<double> d = b - a;
  const double n = std::norm(d);
  if (n == 0) return std::abs(z - a);
  const double t = std::clamp(((z - a) * std::conj(d)).real() / n, 0.0, 1.0);
  return std::abs(z - (a + t * d));
}

/// Plain Nelder-Mead minimiser on R^2.
inline std::array<double, 2> nelder_mead(const std::function<double(std::array<double, 2>)>& f,
                                         std::array<double, 2> x0, double step, int iters = 400) {
  std::array<std::array<double, 2>, 3> s = {x0, x0, x0};
  s[1][0] += step;
  s[2][1] += step;
  std::array<double, 3> v = {f(s[0]), f(s[1]), f(s[2])};
  for (int it = 0; it < iters; ++it) {
    std::array<int, 3> idx = {0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
    const auto best = s[idx[0]], mid = s[idx[1]], worst = s[idx[2]];
    const double fb = v[idx[0]], fm = v[idx[1]], fw = v[idx[2]];
    const std::array<double, 2> c = {(best[0] + mid[0]) / 2, (best[1] + mid[1]) / 2};
    auto lerp = [&](double t) { return std::array<double, 2>{c[0] + t * (worst[0] - c[0]), c[1] + t * (worst[1] - c[1])}; };
    const auto xr = lerp(-1.0);
    const double fr = f(xr);
    std::array<std::array<double, 2>, 3> ns = {best, mid, worst};
    std::array<double, 3> nv = {fb, fm, fw};
    if (fr < fb) {
      const auto xe = lerp(-2.0);
      const double fe = f(xe);
      if (fe < fr) { ns[2] = xe; nv[2] = fe; } else { ns[2] = xr; nv[2] = fr; }
    } else if (fr < fm) {
      ns[2] = xr;
      nv[2] = fr;
    } else {
      const auto xc = lerp(0.5);
      const double fc = f(xc);
      if (fc < fw) {
        ns[2] = xc;
        nv[2] = fc;
      } else {
        for (int k = 1; k < 3; ++k) {
          ns[k] = {(best[0] + ns[k][0]) / 2, (best[1] + ns[k][1]) / 2};
          nv[k] = f(ns[k]);
        }
      }
    }
    s = ns;
    v = nv;
  }
  const int b = static_cast<int>(std::min_element(v.begin(), v.end()) - v.begin());
  return s[b];
}

inline std::array<double, 3> surface_f123(double rho, double theta, const ArticulatoryMap& map) {
  const FormantSet fs = formants_of(coordinate(PolarPoint(std::clamp(rho, 0.0, 1.0), theta), PsiTable::vlam_default()), map);
  return {fs.f[0], fs.f[1], fs.f[2]};
}

inline double dist3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
}

/// Distance in Hz from an (F1, F2, F3) triple to the coordination surface:
/// nearest grid sample, refined by Nelder-Mead over (rho, theta).
struct SurfaceOracle {
  ArticulatoryMap map = ArticulatoryMap::standard();
  std::vector<SurfacePoint> grid;

  SurfaceOracle() {
    std::vector<double> rhos, thetas;
    for (int k = 0; k <= 10; ++k) rhos.push_back(k / 10.0);
    for (int k = 0; k < 72; ++k) thetas.push_back(2 * kPi * k / 72);
    grid = sample_surface(rhos, thetas, PsiTable::vlam_default(), map);
  }

  double distance(const std::array<double, 3>& f) const {
    double best = 1e300;
    std::array<double, 2> x0{};
    for (const auto& g : grid) {
      const double d = dist3(g.f, f);
      if (d < best) {
        best = d;
        x0 = {g.point.rho(), g.point.theta()};
      }
    }
    const auto x = nelder_mead([&](std::array<double, 2> q) { return dist3(surface_f123(q[0], q[1], map), f); }, x0, 0.05);
    return std::min(best, dist3(surface_f123(x[0], x[1], map), f));
  }
};

/// Spectral-envelope peaks of a signal by autocorrelation LPC.
inline std::vector<double> lpc_peaks(const std::vector<double>& x, double fs, int order = 12) {
  const std::size_t n = x.size();
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double pre = i ? x[i] - 0.5 * x[i - 1] : x[i];
    w[i] = pre * (0.54 - 0.46 * std::cos(2 * kPi * static_cast<double>(i) / static_cast<double>(n - 1)));
  }
  std::vector<double> r(order + 1, 0.0);
  for (int k = 0; k <= order; ++k) {
    for (std::size_t i = static_cast<std::size_t>(k); i < n; ++i) r[k] += w[i] * w[i - k];
  }
  std::vector<double> a(order + 1, 0.0);
  a[0] = 1.0;
  double e = r[0];
  for (int i = 1; i <= order; ++i) {
    double acc = r[i];
    for (int j = 1; j < i; ++j) acc += a[j] * r[i - j];
    const double k = -acc / e;
    std::vector<double> prev = a;
    for (int j = 1; j < i; ++j) a[j] = prev[j] + k * prev[i - j];
    a[i] = k;
    e *= 1 - k * k;
  }
  std::vector<double> mag;
  for (int f = 0; f <= static_cast<int>(fs / 2); ++f) {
    std::complex<double> den = 0;
    for (int k = 0; k <= order; ++k) den += a[k] * std::polar(1.0, -2 * kPi * f * k / fs);
    mag.push_back(1.0 / std::abs(den));
  }
  std::vector<double> peaks;
  for (std::size_t f = 1; f + 1 < mag.size(); ++f) {
    if (mag[f] > mag[f - 1] && mag[f] >= mag[f + 1]) peaks.push_back(static_cast<double>(f));
  }
  return peaks;
}

inline double nearest(const std::vector<double>& v, double target) {
  double best = 1e300;
  for (double x : v) {
    if (std::abs(x - target) < std::abs(best - target)) best = x;
  }
  return best;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  const auto p = std::filesystem::path(GESTURA_TEST_TMP) / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

struct CliResult {
  int status = -1;
  std::string out;
  std::string err;
};

/// Run the CLI with `args`, capturing stdout and stderr.
inline CliResult run_cli(const std::string& args, const std::filesystem::path& scratch) {
  const auto out = scratch / "stdout.txt";
  const auto err = scratch / "stderr.txt";
  const std::string cmd = std::string(GESTURA_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int raw = std::system(cmd.c_str());
  CliResult r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = read_text(out.string());
  r.err = read_text(err.string());
  return r;
}

inline std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace testing_support
