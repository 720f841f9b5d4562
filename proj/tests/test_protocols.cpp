#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "wvsim/protocols.hpp"

using namespace wvsim;

namespace {

double sum_probs(const PointerStats& st) {
  double s = 0.0;
  for (const auto& [label, p] : st.outcome_probs) s += p;
  return s;
}

}  // namespace

TEST_CASE("weak regime at zero coupling is non-perturbing") {
  for (double gamma : {0.0, 0.3, M_PI / 4, 1.2}) {
    PrePostSelection sel{gamma};
    PointerStats st = run_weak_regime(sel, 0.0);
    CHECK(st.valid);
    CHECK(st.exp_x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(st.p_postselect == doctest::Approx(sel.overlap_prob()).epsilon(1e-12));
    CHECK(st.system_fidelity == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("weak regime disturbance follows the closed form") {
  // F = 1 - sin^2(2 gamma) (1 - cos phi) / 4
  for (double phi : {0.0, 0.18 * M_PI, M_PI / 2, M_PI}) {
    for (double gamma : {0.0, 0.2, M_PI / 4, 0.6, M_PI / 2, 1.9}) {
      PointerStats st = run_weak_regime({gamma}, phi);
      double s2 = std::sin(2.0 * gamma);
      double expect = 1.0 - 0.25 * s2 * s2 * (1.0 - std::cos(phi));
      CHECK(st.system_fidelity == doctest::Approx(expect).epsilon(1e-10));
    }
  }
  PointerStats pinned = run_weak_regime({M_PI / 4}, 0.18 * M_PI);
  CHECK(pinned.system_fidelity == doctest::Approx(0.961).epsilon(2e-3));
}

TEST_CASE("weak regime outcome distribution") {
  PointerStats st = run_weak_regime({0.5}, 0.18 * M_PI);
  CHECK(sum_probs(st) == doctest::Approx(1.0).epsilon(1e-12));
  double pp = st.outcome_probs.at("plus_post");
  double pm = st.outcome_probs.at("minus_post");
  CHECK(pp + pm == doctest::Approx(st.p_postselect).epsilon(1e-12));
  CHECK((pp - pm) / (pp + pm) == doctest::Approx(st.exp_x).epsilon(1e-10));
}

TEST_CASE("weak regime invalid when the post-selected port is dark") {
  // with no interaction the orthogonal pre-selection never post-selects
  PointerStats st = run_weak_regime({3.0 * M_PI / 4.0}, 0.0);
  CHECK_FALSE(st.valid);
  CHECK(st.p_postselect < 1e-10);
  RegimeConfig cfg{Regime::WeakInteraction, {}, {0.18 * M_PI, CouplingMeaning::PhaseShiftPhi},
                   FeedforwardMode::Off};
  CHECK_THROWS_AS(estimate_weak_value(st, cfg, 0.3), InvalidStats);

  // a finite coupling reopens the port (anomalous-amplification regime)
  PointerStats amped = run_weak_regime({3.0 * M_PI / 4.0}, 0.18 * M_PI);
  CHECK(amped.valid);
  CHECK(amped.p_postselect > 0.0);
}

TEST_CASE("insensitive regime small-deviation response") {
  // exp_x -> sqrt(2) delta Abar_w as delta -> 0
  double delta = 1e-3;
  for (double gamma : {0.2, 0.6, 1.0, 1.4}) {
    PointerStats st = run_insensitive_regime({gamma}, delta);
    double abar = std::real(weak_value(pauli_z(), {gamma}));
    CHECK(st.exp_x / (std::sqrt(2.0) * delta) ==
          doctest::Approx(abar).epsilon(1e-4));
  }
  CHECK_THROWS_AS(run_insensitive_regime({0.5}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(run_insensitive_regime({0.5}, -1.2), std::invalid_argument);
}

TEST_CASE("insensitive regime disturbance follows the closed form") {
  // F = 1 - sin^2(2 gamma) delta^2 / 2
  for (double delta : {0.05, 0.1478, 0.3}) {
    for (double gamma : {0.0, 0.3, M_PI / 4, 1.1, M_PI / 2}) {
      PointerStats st = run_insensitive_regime({gamma}, delta);
      double s2 = std::sin(2.0 * gamma);
      double expect = 1.0 - 0.5 * s2 * s2 * delta * delta;
      CHECK(st.system_fidelity == doctest::Approx(expect).epsilon(1e-10));
      CHECK(sum_probs(st) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("strong pointer regime reads the contracted operator") {
  // exp_z = (1 - |Abar|^2)/2 and exp_x = Re Abar on the unnormalized pointer
  for (double gamma : {0.1, 0.4, M_PI / 4, 0.9, 1.3}) {
    PointerStats st = run_strong_pointer_regime({gamma});
    cx abar = weak_value(pauli_z(), {gamma});
    CHECK(st.exp_z == doctest::Approx(0.5 * (1.0 - std::norm(abar))).epsilon(1e-10));
    CHECK(st.exp_x == doctest::Approx(std::real(abar)).epsilon(1e-10));
  }
}

TEST_CASE("erasure regime exact branch probabilities") {
  double delta = 0.08;
  double ge = std::sqrt(1.0 - delta * delta);
  for (double gamma : {0.3, M_PI / 4, 1.0, M_PI / 2}) {
    PrePostSelection sel{gamma};
    double abar = std::real(weak_value(pauli_z(), {gamma}));
    PointerStats st = run_erasure_regime(sel, delta, FeedforwardMode::TrueOperator);

    double ov = sel.overlap_prob();
    double p1 = ov * (ge + delta * abar) * (ge + delta * abar) / 2.0;
    double p2 = ov * (ge - delta * abar) * (ge - delta * abar) / 2.0;
    CHECK(st.outcome_probs.at("erase_post") == doctest::Approx(p1).epsilon(1e-10));
    CHECK(st.outcome_probs.at("perp_post") == doctest::Approx(p2).epsilon(1e-10));
    CHECK(sum_probs(st) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(st.exp_z == doctest::Approx((p1 - p2) / (p1 + p2)).epsilon(1e-10));
  }
}

TEST_CASE("erasure regime asymmetry at gamma = pi/2") {
  double delta = 0.08;
  double ge = std::sqrt(1.0 - delta * delta);
  PointerStats st = run_erasure_regime({M_PI / 2}, delta, FeedforwardMode::TrueOperator);
  double expect = -2.0 * delta * ge / (ge * ge + delta * delta);
  CHECK(st.exp_z == doctest::Approx(expect).epsilon(1e-10));
  CHECK(expect == doctest::Approx(-0.1595).epsilon(2e-3));
}

TEST_CASE("simulated projection reproduces the feed-forward statistics") {
  for (double gamma : {0.2, 0.7, 1.2, M_PI / 2}) {
    for (double delta : {0.05, 0.08, 0.2}) {
      PointerStats a = run_erasure_regime({gamma}, delta, FeedforwardMode::TrueOperator);
      PointerStats b = run_erasure_regime({gamma}, delta, FeedforwardMode::SimulatedProjection);
      for (const auto& [label, p] : a.outcome_probs)
        CHECK(b.outcome_probs.at(label) == doctest::Approx(p).epsilon(1e-10));
      CHECK(b.exp_z == doctest::Approx(a.exp_z).epsilon(1e-10));
    }
  }
}

TEST_CASE("erasure small-deviation response") {
  double delta = 1e-3;
  for (double gamma : {0.2, 0.6, 1.0, 1.4}) {
    PointerStats st = run_erasure_regime({gamma}, delta, FeedforwardMode::TrueOperator);
    double abar = std::real(weak_value(pauli_z(), {gamma}));
    CHECK(st.exp_z / (2.0 * delta) == doctest::Approx(abar).epsilon(1e-4));
  }
  CHECK_THROWS_AS(run_erasure_regime({0.5}, 1.0, FeedforwardMode::Off),
                  std::invalid_argument);
}

TEST_CASE("weak-value inversion") {
  RegimeConfig weak{Regime::WeakInteraction, {}, {0.3, CouplingMeaning::WeakG},
                    FeedforwardMode::Off};
  PointerStats st;
  st.valid = true;
  st.exp_x = 1.0 - 0.09 * 0.25;  // g = 0.3, |A_w| = 0.5
  WeakValueEstimate est = estimate_weak_value(st, weak, 0.3);
  CHECK(std::real(est.value) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(est.stderr_value == doctest::Approx(0.0).epsilon(1e-12));

  PointerStats over;
  over.valid = true;
  over.exp_x = 1.0 + 1e-6;
  CHECK_THROWS_AS(estimate_weak_value(over, weak, 0.3), NonInvertible);
  over.shots = 100;  // sampled fluctuation above 1 clamps instead
  over.se_x = 0.05;
  WeakValueEstimate clamped = estimate_weak_value(over, weak, 0.3);
  CHECK(std::real(clamped.value) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(clamped.stderr_value > 0.0);

  CHECK_THROWS_AS(estimate_weak_value(st, weak, 0.0), std::invalid_argument);
}

TEST_CASE("insensitive and erasure inversion") {
  PointerStats st;
  st.valid = true;
  st.exp_x = 0.1;
  st.se_x = 0.01;
  RegimeConfig ins{Regime::InsensitivePointer, {}, {0.2, CouplingMeaning::PointerDelta},
                   FeedforwardMode::Off};
  WeakValueEstimate e1 = estimate_weak_value(st, ins, 0.2);
  CHECK(std::real(e1.value) == doctest::Approx(0.25).epsilon(1e-12));  // (1 - 0.5)/2
  CHECK(e1.stderr_value == doctest::Approx(0.01 / 0.4).epsilon(1e-12));

  PointerStats sz;
  sz.valid = true;
  sz.exp_z = 0.4;
  sz.se_z = 0.02;
  RegimeConfig era{Regime::Erasure, {}, {0.1, CouplingMeaning::PointerDelta},
                   FeedforwardMode::TrueOperator};
  WeakValueEstimate e2 = estimate_weak_value(sz, era, 0.1);
  CHECK(std::real(e2.value) == doctest::Approx(0.0).epsilon(1e-12));  // Abar = 1
  CHECK(e2.stderr_value == doctest::Approx(0.02 / 0.8).epsilon(1e-12));
}

TEST_CASE("regime names") {
  CHECK(std::string(regime_name(Regime::WeakInteraction)) == "weak");
  CHECK(std::string(regime_name(Regime::InsensitivePointer)) == "insensitive");
  CHECK(std::string(regime_name(Regime::Erasure)) == "erasure");
}
