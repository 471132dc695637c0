#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "starksim/constants.hpp"
#include "starksim/errors.hpp"
#include "starksim/trace.hpp"

namespace starksim {

namespace detail {

// Pairwise (cascade) summation over a fixed binary tree; the result depends
// only on element order, not on how callers partitioned the work.
template <typename T>
T pairwise_sum(const std::vector<T>& xs, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return xs[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(xs, lo, mid) + pairwise_sum(xs, mid, hi);
}

template <typename T>
T pairwise_sum(const std::vector<T>& xs) {
  if (xs.empty()) return T{};
  return pairwise_sum<T>(xs, 0, xs.size());
}

}  // namespace detail

// Pointwise mean of traces over identical abscissas.
inline Trace ensemble_average(const std::vector<Trace>& traces) {
  if (traces.empty()) throw ShapeError("no traces to average");
  const Trace& first = traces.front();
  for (const Trace& t : traces) {
    if (t.abscissa.size() != first.abscissa.size()) {
      throw ShapeError("trace lengths differ");
    }
    for (std::size_t i = 0; i < t.abscissa.size(); ++i) {
      if (t.abscissa[i] != first.abscissa[i]) {
        throw ShapeError("trace abscissas differ at point " + std::to_string(i));
      }
    }
  }

  Trace out;
  out.abscissa_name = first.abscissa_name;
  out.abscissa = first.abscissa;
  out.complex_valued = first.complex_valued;
  out.ordinate.resize(first.size());
  out.donor_count.assign(first.size(), 0);
  std::vector<std::complex<double>> column(traces.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    long n = 0;
    for (std::size_t k = 0; k < traces.size(); ++k) {
      column[k] = traces[k].ordinate[i];
      n += traces[k].donor_count.empty() ? 1 : traces[k].donor_count[i];
    }
    out.ordinate[i] =
        detail::pairwise_sum(column) / static_cast<double>(traces.size());
    out.donor_count[i] = n;
  }
  return out;
}

enum class ApodizationWindow { None, Exponential };

// Two-sided discrete Fourier transform of a uniformly sampled complex trace.
// Frequency axis runs from -N/(2 N dt) to just under +Nyquist in steps of
// 1/(N dt) (N = padded length). pad_factor > 1 zero-pads the record before
// transforming to refine the bin spacing.
inline Spectrum fft_distribution(const Trace& trace,
                                 ApodizationWindow window = ApodizationWindow::None,
                                 int pad_factor = 1) {
  const std::size_t n = trace.size();
  if (n < 2) throw ShapeError("trace too short for a transform");
  const double dt = trace.abscissa[1] - trace.abscissa[0];
  if (!(dt > 0)) throw std::domain_error("time grid must be increasing");
  for (std::size_t i = 1; i < n; ++i) {
    const double step = trace.abscissa[i] - trace.abscissa[i - 1];
    if (std::abs(step - dt) > 1e-9 * dt) {
      throw std::domain_error("time grid is not uniform");
    }
  }
  if (pad_factor < 1) throw std::domain_error("pad factor must be >= 1");

  std::vector<std::complex<double>> x(trace.ordinate.begin(),
                                      trace.ordinate.end());
  if (window == ApodizationWindow::Exponential) {
    // decay to e^{-3} across the record
    const double rate = 3.0 / (static_cast<double>(n - 1));
    for (std::size_t i = 0; i < n; ++i) x[i] *= std::exp(-rate * static_cast<double>(i));
  }
  const std::size_t m = n * static_cast<std::size_t>(pad_factor);
  x.resize(m, std::complex<double>(0, 0));

  Spectrum spec;
  spec.freq_hz.resize(m);
  spec.amplitude.resize(m);
  const long half = static_cast<long>(m) / 2;
  const double df = 1.0 / (static_cast<double>(m) * dt);
  const std::complex<double> i_unit(0, 1);
  for (long k = 0; k < static_cast<long>(m); ++k) {
    const long bin = k - half;  // fftshifted: ascending frequency
    std::complex<double> acc(0, 0);
    const double w = -kTwoPi * static_cast<double>(bin) / static_cast<double>(m);
    // direct transform; record lengths stay small enough that O(N^2) is fine
    for (std::size_t j = 0; j < m; ++j) {
      acc += x[j] * std::exp(i_unit * (w * static_cast<double>(j)));
    }
    spec.freq_hz[k] = static_cast<double>(bin) * df;
    spec.amplitude[k] = acc;
  }
  return spec;
}

enum class LineModel { Lorentzian, Gaussian };

struct LineshapeFit {
  double center_hz = 0.0;
  double fwhm_hz = 0.0;
  double amplitude = 0.0;
  LineModel model = LineModel::Lorentzian;
  double residual_norm = 0.0;
  int iterations = 0;
  std::vector<double> residual_history;  // accepted steps only
};

namespace detail {

inline double line_value(LineModel model, double f, double c, double w,
                         double a) {
  const double u = 2.0 * (f - c) / w;
  if (model == LineModel::Lorentzian) return a / (1.0 + u * u);
  return a * std::exp(-std::log(2.0) * u * u);
}

// d(model)/d(c, w, a)
inline void line_jacobian(LineModel model, double f, double c, double w,
                          double a, double* jc, double* jw, double* ja) {
  const double u = 2.0 * (f - c) / w;
  if (model == LineModel::Lorentzian) {
    const double den = 1.0 + u * u;
    const double base = a / (den * den);
    *jc = base * 2.0 * u * (2.0 / w);
    *jw = base * 2.0 * u * u / w;
    *ja = 1.0 / den;
  } else {
    const double l2 = std::log(2.0);
    const double e = std::exp(-l2 * u * u);
    *jc = a * e * l2 * 2.0 * u * (2.0 / w);
    *jw = a * e * l2 * 2.0 * u * u / w;
    *ja = e;
  }
}

}  // namespace detail

// Damped least squares on the magnitude spectrum with analytic Jacobians.
// Initial guess from the peak bin, the half-maximum crossings, and the peak
// value. Converges on relative parameter change < 1e-10, capped at 200
// iterations.
inline LineshapeFit fit_lineshape(const Spectrum& spec, LineModel model) {
  const std::size_t n = spec.size();
  if (n < 5) throw FitError("spectrum too short to fit");

  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = std::abs(spec.amplitude[i]);

  std::vector<double> sorted = y;
  std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
  const double median = sorted[n / 2];
  const std::size_t peak =
      std::max_element(y.begin(), y.end()) - y.begin();
  if (!(y[peak] > 5.0 * median)) {
    throw FitError("no resolvable peak (max <= 5x median)");
  }

  // half-max crossings around the peak
  const double halfmax = 0.5 * y[peak];
  std::size_t left = peak, right = peak;
  while (left > 0 && y[left] > halfmax) --left;
  while (right + 1 < n && y[right] > halfmax) ++right;
  const double df = spec.freq_hz[1] - spec.freq_hz[0];
  double c = spec.freq_hz[peak];
  double w = std::max((spec.freq_hz[right] - spec.freq_hz[left]), df);
  double a = y[peak];

  auto residual_norm2 = [&](double cc, double ww, double aa) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = detail::line_value(model, spec.freq_hz[i], cc, ww, aa) - y[i];
      s += r * r;
    }
    return s;
  };

  double lambda = 1e-3;
  double cost = residual_norm2(c, w, a);
  LineshapeFit fit;
  fit.model = model;
  fit.residual_history.push_back(std::sqrt(cost));

  int iter = 0;
  for (; iter < 200; ++iter) {
    // normal equations J^T J + lambda diag, J^T r
    double jtj[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    double jtr[3] = {0, 0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      double jc, jw, ja;
      detail::line_jacobian(model, spec.freq_hz[i], c, w, a, &jc, &jw, &ja);
      const double r = detail::line_value(model, spec.freq_hz[i], c, w, a) - y[i];
      const double j[3] = {jc, jw, ja};
      for (int p = 0; p < 3; ++p) {
        jtr[p] += j[p] * r;
        for (int q = 0; q < 3; ++q) jtj[p][q] += j[p] * j[q];
      }
    }

    bool accepted = false;
    for (int attempt = 0; attempt < 24 && !accepted; ++attempt) {
      double m[3][3];
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q)
          m[p][q] = jtj[p][q] + (p == q ? lambda * (jtj[p][p] + 1e-30) : 0.0);
      // solve 3x3 by gaussian elimination
      double rhs[3] = {-jtr[0], -jtr[1], -jtr[2]};
      double aug[3][4];
      for (int p = 0; p < 3; ++p) {
        for (int q = 0; q < 3; ++q) aug[p][q] = m[p][q];
        aug[p][3] = rhs[p];
      }
      bool singular = false;
      for (int p = 0; p < 3; ++p) {
        int piv = p;
        for (int q = p + 1; q < 3; ++q)
          if (std::abs(aug[q][p]) > std::abs(aug[piv][p])) piv = q;
        if (std::abs(aug[piv][p]) < 1e-300) {
          singular = true;
          break;
        }
        std::swap(aug[p], aug[piv]);
        for (int q = p + 1; q < 3; ++q) {
          const double f = aug[q][p] / aug[p][p];
          for (int r2 = p; r2 < 4; ++r2) aug[q][r2] -= f * aug[p][r2];
        }
      }
      double step[3] = {0, 0, 0};
      if (!singular) {
        for (int p = 2; p >= 0; --p) {
          double s = aug[p][3];
          for (int q = p + 1; q < 3; ++q) s -= aug[p][q] * step[q];
          step[p] = s / aug[p][p];
        }
      }
      const double nc = c + step[0];
      const double nw = w + step[1];
      const double na = a + step[2];
      const double new_cost =
          (singular || !(nw > 0)) ? cost + 1.0 : residual_norm2(nc, nw, na);
      if (new_cost < cost) {
        const double rel = std::max({std::abs(step[0]) / std::max(std::abs(c), 1e-300),
                                     std::abs(step[1]) / std::max(std::abs(w), 1e-300),
                                     std::abs(step[2]) / std::max(std::abs(a), 1e-300)});
        c = nc;
        w = nw;
        a = na;
        cost = new_cost;
        lambda = std::max(lambda * 0.1, 1e-14);
        fit.residual_history.push_back(std::sqrt(cost));
        accepted = true;
        if (rel < 1e-10) {
          fit.center_hz = c;
          fit.fwhm_hz = w;
          fit.amplitude = a;
          fit.residual_norm = std::sqrt(cost);
          fit.iterations = iter + 1;
          return fit;
        }
      } else {
        lambda *= 10.0;
      }
    }
    if (!accepted) break;  // no improving step at any damping: converged
  }
  if (iter >= 200) {
    throw FitError("lineshape fit did not converge after 200 iterations"
                   "; last residual " + std::to_string(std::sqrt(cost)));
  }
  fit.center_hz = c;
  fit.fwhm_hz = w;
  fit.amplitude = a;
  fit.residual_norm = std::sqrt(cost);
  fit.iterations = iter + 1;
  return fit;
}

}  // namespace starksim
