#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "starksim/stark.hpp"
#include "support/sb_config.hpp"

using namespace starksim;
using Catch::Approx;

namespace {
const double kE150V = testcfg::kPlateVolts / (testcfg::kThicknessMm * 1000.0);
}

TEST_CASE("NMR quadratic Stark shift matches the measured 2.5 kHz") {
  const double shift = quadratic_shift(testcfg::sb121(), testcfg::kB0Tesla,
                                       testcfg::nmr_line(), kE150V);
  CHECK(std::abs(shift) == Approx(2.5e3).epsilon(0.10));
}

TEST_CASE("ESR m_I = +-5/2 shift is about 12 kHz at the maximum field") {
  for (int tmi : {-5, 5}) {
    const double shift =
        quadratic_shift(testcfg::sb121(), testcfg::kB0Tesla,
                        TransitionLabel::esr(half(tmi)), kE150V);
    CHECK(std::abs(shift) == Approx(12e3).epsilon(0.15));
  }
}

TEST_CASE("zero field gives zero shift") {
  CHECK(quadratic_shift(testcfg::sb121(), testcfg::kB0Tesla,
                        testcfg::nmr_line(), 0.0) == 0.0);
}

TEST_CASE("quadratic shift scales exactly as E^2") {
  const double base = quadratic_shift(testcfg::sb121(), testcfg::kB0Tesla,
                                      testcfg::nmr_line(), 0.04);
  const double doubled = quadratic_shift(testcfg::sb121(), testcfg::kB0Tesla,
                                         testcfg::nmr_line(), 0.08);
  CHECK(doubled == Approx(4.0 * base).epsilon(1e-12));
}

TEST_CASE("total shift composition") {
  const SpinSystem sys = testcfg::sb121();
  const TransitionLabel t = testcfg::nmr_line();
  const double b0 = testcfg::kB0Tesla;

  SECTION("nominal donor reduces to the quadratic shift") {
    DonorInstance d;
    CHECK(total_shift(sys, b0, t, kE150V, d) ==
          quadratic_shift(sys, b0, t, kE150V));
  }

  SECTION("even in E when the linear coefficient vanishes") {
    DonorInstance d;
    d.field_scale = 1.3;
    d.magnetic_detuning_hz = 40.0;
    CHECK(total_shift(sys, b0, t, 0.05, d) ==
          total_shift(sys, b0, t, -0.05, d));
  }

  SECTION("linear term adds lambda * s * E") {
    DonorInstance d;
    d.linear_stark_hz_per_field = 10e3;
    const double q = quadratic_shift(sys, b0, t, 0.05);
    CHECK(total_shift(sys, b0, t, 0.05, d) == Approx(q + 500.0).margin(1e-9));
  }

  SECTION("bipolar antisymmetry: polarity reversal cancels the linear term") {
    DonorInstance d;
    d.field_scale = 0.8;
    d.linear_stark_hz_per_field = 25e3;
    d.magnetic_detuning_hz = -120.0;
    for (double e : {0.01, 0.0877, 0.3}) {
      const double plus = total_shift(sys, b0, t, e, d);
      const double minus = total_shift(sys, b0, t, -e, d);
      const double quad = quadratic_shift(sys, b0, t, d.field_scale * e);
      CHECK(plus + minus - 2.0 * quad - 2.0 * d.magnetic_detuning_hz == 0.0);
    }
  }
}

TEST_CASE("donor sampling is a pure function of (seed, index)") {
  EnsembleDistribution dist;
  dist.magnetic_fwhm_hz = 500.0;
  dist.field_scale_fwhm = 0.1;
  dist.linear_stark_sigma = 20e3;

  const DonorInstance a = sample_donor(dist, 42, 7);
  const DonorInstance b = sample_donor(dist, 42, 7);
  CHECK(a.magnetic_detuning_hz == b.magnetic_detuning_hz);
  CHECK(a.field_scale == b.field_scale);
  CHECK(a.linear_stark_hz_per_field == b.linear_stark_hz_per_field);

  const DonorInstance c = sample_donor(dist, 43, 7);
  CHECK(a.magnetic_detuning_hz != c.magnetic_detuning_hz);

  // extending the ensemble must not reshuffle earlier donors
  const Ensemble e10 = Ensemble::sample(dist, 42, 10);
  const Ensemble e20 = Ensemble::sample(dist, 42, 20);
  for (int i = 0; i < 10; ++i) {
    CHECK(e10.donors[i].field_scale == e20.donors[i].field_scale);
  }
}

TEST_CASE("zero widths give the nominal donor") {
  const DonorInstance d = sample_donor(EnsembleDistribution{}, 1, 0);
  CHECK(d.magnetic_detuning_hz == 0.0);
  CHECK(d.field_scale == 1.0);
  CHECK(d.linear_stark_hz_per_field == 0.0);
}

TEST_CASE("negative widths are rejected") {
  EnsembleDistribution dist;
  dist.field_scale_fwhm = -0.1;
  CHECK_THROWS_AS(sample_donor(dist, 1, 0), std::domain_error);
}

TEST_CASE("field-scale median absolute deviation recovers the half width") {
  EnsembleDistribution dist;
  dist.field_scale_fwhm = 0.1;
  const int n = 100000;
  std::vector<double> dev;
  dev.reserve(n);
  for (int i = 0; i < n; ++i) {
    const DonorInstance d = sample_donor(dist, 7, i);
    CHECK(d.field_scale > 0.0);
    CHECK(d.field_scale <= 4.0);
    dev.push_back(std::abs(d.field_scale - 1.0));
  }
  std::nth_element(dev.begin(), dev.begin() + n / 2, dev.end());
  // Cauchy median absolute deviation equals the half width
  CHECK(dev[n / 2] == Approx(0.5 * dist.field_scale_fwhm).epsilon(0.05));
}
