#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "starksim/constants.hpp"
#include "starksim/spin_core.hpp"
#include "support/sb_config.hpp"

using namespace starksim;
using Catch::Approx;

TEST_CASE("singlet-triplet splitting of the pure contact interaction") {
  SpinSystem s;
  s.nuclear_spin = half(1);
  s.hyperfine_hz = 1e6;
  s.electron_g = 2.0;
  s.gamma_n_hz_per_t = 0.0;

  const Eigen::MatrixXcd h = build_hamiltonian(s, 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + 4);
  std::sort(ev.begin(), ev.end());
  CHECK(ev[0] == Approx(-0.75e6).margin(1e-3));
  CHECK(ev[1] == Approx(0.25e6).margin(1e-3));
  CHECK(ev[2] == Approx(0.25e6).margin(1e-3));
  CHECK(ev[3] == Approx(0.25e6).margin(1e-3));
}

TEST_CASE("no interactions gives the zero matrix") {
  SpinSystem s;
  s.nuclear_spin = half(3);
  s.hyperfine_hz = 0.0;
  const Eigen::MatrixXcd h = build_hamiltonian(s, 0.0);
  CHECK(h.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dimension is 2(2I+1)") {
  CHECK(build_hamiltonian(testcfg::sb121(), 0.1).rows() == 12);
  CHECK(testcfg::sb121().dim() == 12);
}

TEST_CASE("invalid inputs are rejected") {
  SpinSystem s = testcfg::sb121();
  CHECK_THROWS_AS(build_hamiltonian(s, -1.0), std::domain_error);
  s.hyperfine_hz = -5.0;
  CHECK_THROWS_AS(build_hamiltonian(s, 0.1), std::domain_error);
  SpinSystem bad = testcfg::sb121();
  bad.nuclear_spin = half(0);
  CHECK_THROWS_AS(build_hamiltonian(bad, 0.1), std::domain_error);
  CHECK_THROWS_AS(HalfInt::from_double(0.3), std::domain_error);
}

TEST_CASE("hamiltonian is hermitian and its eigenvalues sum to the trace") {
  const SpinSystem s = testcfg::sb121();
  for (double b0 : {0.0, 0.05, 0.3635, 2.0}) {
    const Eigen::MatrixXcd h = build_hamiltonian(s, b0);
    const double scale = h.norm();
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const double sum = es.eigenvalues().sum();
    CHECK(sum == Approx(h.trace().real()).margin(1e-9 * std::max(scale, 1.0)));
  }
}

TEST_CASE("X-band ESR transition sits near 9.7 GHz") {
  const SpinSystem s = testcfg::sb121();
  const double f =
      transition_frequency(s, 0.33, TransitionLabel::esr(half(5)));
  CHECK(f == Approx(9.7e9).epsilon(0.05));
  // the m_I = -5/2 line reaches 9.7 GHz near 0.36 T
  const double f2 = transition_frequency(s, testcfg::kB0Tesla,
                                         TransitionLabel::esr(half(-5)));
  CHECK(f2 == Approx(9.7e9).epsilon(0.01));
}

TEST_CASE("exact ESR frequency approaches the first-order formula at high field") {
  const SpinSystem s = testcfg::sb121();
  const double b0 = 10.0;
  for (int tmi : {-5, -1, 3}) {
    const double exact =
        transition_frequency(s, b0, TransitionLabel::esr(half(tmi)));
    const double first_order = s.electron_g * kMuBOverH * b0 +
                               0.5 * tmi * s.hyperfine_hz;
    CHECK(std::abs(exact - first_order) / first_order < 1e-5);
    // the residual is genuinely second order: well below the hyperfine scale
    CHECK(std::abs(exact - first_order) < 0.01 * s.hyperfine_hz);
  }
}

TEST_CASE("decoupled system has the bare nuclear Zeeman NMR frequency") {
  SpinSystem s = testcfg::sb121();
  s.hyperfine_hz = 0.0;
  const double b0 = 0.4;
  const double f = transition_frequency(
      s, b0, TransitionLabel::nmr(half(1), half(1)));
  CHECK(f == Approx(std::abs(s.gamma_n_hz_per_t) * b0).epsilon(1e-12));
}

TEST_CASE("ambiguous level identification raises at very low field") {
  const SpinSystem s = testcfg::sb121();
  CHECK_THROWS_AS(
      transition_frequency(s, 1e-4, TransitionLabel::esr(half(-5))),
      IdentificationError);
}

TEST_CASE("transition labels are validated against the system") {
  const SpinSystem s = testcfg::sb121();
  CHECK_THROWS_AS(transition_frequency(s, 0.3, TransitionLabel::esr(half(7))),
                  std::domain_error);
  CHECK_THROWS_AS(
      transition_frequency(s, 0.3, TransitionLabel::nmr(half(3), half(1))),
      std::domain_error);
  CHECK_THROWS_AS(
      transition_frequency(s, 0.3, TransitionLabel::nmr(half(1), half(-5))),
      std::domain_error);
}

TEST_CASE("transition frequency is first-order continuous in B0") {
  const SpinSystem s = testcfg::sb121();
  const TransitionLabel t = testcfg::nmr_line();
  const double b0 = testcfg::kB0Tesla;
  const double f0 = transition_frequency(s, b0, t);
  const double step = 1e-4;
  const double d1 = transition_frequency(s, b0 + step, t) - f0;
  const double d2 = transition_frequency(s, b0 + 0.5 * step, t) - f0;
  CHECK(d1 / d2 == Approx(2.0).epsilon(0.01));
}

TEST_CASE("sensitivities approach the high-field limits") {
  const SpinSystem s = testcfg::sb121();

  SECTION("ESR df/dA converges to m_I, deviation shrinking as 1/B0") {
    for (int tmi : {-5, -1, 5}) {
      const TransitionLabel t = TransitionLabel::esr(half(tmi));
      const double dev80 =
          std::abs(transition_sensitivities(s, 80.0, t).df_da - 0.5 * tmi);
      const double dev40 =
          std::abs(transition_sensitivities(s, 40.0, t).df_da - 0.5 * tmi);
      CHECK(dev80 < 1e-3);
      CHECK(dev80 < dev40 / 1.8);
    }
  }

  SECTION("NMR df/dA converges to 1/2 for the central pair") {
    const Sensitivities sens =
        transition_sensitivities(s, 5.0, testcfg::nmr_line());
    CHECK(std::abs(sens.df_da - 0.5) < 1e-3);
  }

  SECTION("ESR df/dg_e equals muB B0/h within 0.1%") {
    for (double b0 : {0.3635, 5.0}) {
      const Sensitivities sens =
          transition_sensitivities(s, b0, testcfg::esr_line());
      CHECK(sens.df_dg_hz == Approx(kMuBOverH * b0).epsilon(1e-3));
    }
  }

  SECTION("NMR df/dg_e decays toward zero with increasing field") {
    const double d5 =
        std::abs(transition_sensitivities(s, 5.0, testcfg::nmr_line()).df_dg_hz);
    const double d10 =
        std::abs(transition_sensitivities(s, 10.0, testcfg::nmr_line()).df_dg_hz);
    const double d20 =
        std::abs(transition_sensitivities(s, 20.0, testcfg::nmr_line()).df_dg_hz);
    CHECK(d10 < d5 / 1.8);
    CHECK(d20 < d10 / 1.8);
    // tiny compared to the ESR value at the same field
    CHECK(d5 < 1e-5 * kMuBOverH * 5.0);
  }
}
