#pragma once

#include <complex>
#include <string>
#include <vector>

namespace starksim {

// One measured curve: named abscissa, complex ordinate (imaginary part zero
// for echo-intensity traces), and the number of donors that entered each
// point.
struct Trace {
  std::string abscissa_name;
  std::vector<double> abscissa;
  std::vector<std::complex<double>> ordinate;
  std::vector<long> donor_count;
  bool complex_valued = false;

  std::size_t size() const { return abscissa.size(); }
};

// Row-major 2D map (e.g. echo vs tau_RF x tau_V).
struct Trace2D {
  std::string row_name, col_name;
  std::vector<double> rows, cols;
  std::vector<double> values;  // rows.size() * cols.size(), row-major

  double& at(std::size_t r, std::size_t c) { return values[r * cols.size() + c]; }
  double at(std::size_t r, std::size_t c) const {
    return values[r * cols.size() + c];
  }
};

// Discrete spectrum on a uniform, increasing frequency axis.
struct Spectrum {
  std::vector<double> freq_hz;
  std::vector<std::complex<double>> amplitude;

  std::size_t size() const { return freq_hz.size(); }
};

}  // namespace starksim
