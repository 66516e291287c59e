#include <doctest.h>

#include <cmath>
#include <numeric>

#include "otl/hedge.hpp"
#include "otl/random.hpp"

using namespace otl;

namespace {

double weight_sum(const EnsembleState& s) {
  double total = 0.0;
  for (double w : s.u()) total += w;
  for (double w : s.v()) total += w;
  return total;
}

// Hedge abstraction over 2n experts with 0/1 losses; returns the
// cumulative weighted loss sum_t w_t . l_t.
double run_hedge_weighted_loss(const std::vector<std::vector<int>>& z,
                               const std::vector<std::vector<int>>& r,
                               double beta) {
  const int n = static_cast<int>(z[0].size());
  EnsembleState state(n, beta);
  double weighted_loss = 0.0;
  for (size_t t = 0; t < z.size(); ++t) {
    RoundOutcome o;
    o.z = z[t];
    o.r = r[t];
    for (int i = 0; i < n; ++i) {
      weighted_loss += state.u()[i] * o.z[i] + state.v()[i] * o.r[i];
    }
    state.update(o);
  }
  return weighted_loss;
}

}  // namespace

TEST_CASE("init_weights gives 1/(2n) everywhere") {
  const EnsembleState s2 = init_weights(2, 0.9);
  for (double w : s2.u()) CHECK(w == doctest::Approx(0.25));
  for (double w : s2.v()) CHECK(w == doctest::Approx(0.25));

  const EnsembleState s1 = init_weights(1, 0.9);
  CHECK(s1.u()[0] == doctest::Approx(0.5));
  CHECK(s1.v()[0] == doctest::Approx(0.5));

  for (int n : {1, 3, 7}) {
    CHECK(weight_sum(init_weights(n, 0.5)) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS(init_weights(0, 0.5));
  CHECK_THROWS(init_weights(2, 1.0));
}

TEST_CASE("ensemble_predict combines and tie-breaks low") {
  SUBCASE("single dominant expert") {
    EnsembleState s(1, 0.5);
    // drive u to ~0 with repeated source mistakes
    for (int t = 0; t < 200; ++t) s.update({{1}, {0}, false});
    Vector src(2), tgt(2);
    src << 5, -5;
    tgt << 0.1, 0.9;
    const auto pred = ensemble_predict({src}, {tgt}, s);
    CHECK(pred.label == 1);
    CHECK(pred.combined[1] > pred.combined[0]);
  }
  SUBCASE("tie goes to the lowest index") {
    const EnsembleState s(1, 0.5);
    Vector src(2), tgt(2);
    src << 1, 0;
    tgt << 0, 1;
    const auto pred = ensemble_predict({src}, {tgt}, s);
    CHECK(pred.combined[0] == doctest::Approx(0.5));
    CHECK(pred.combined[1] == doctest::Approx(0.5));
    CHECK(pred.label == 0);
  }
  SUBCASE("positive scaling leaves the argmax unchanged") {
    const EnsembleState s(2, 0.7);
    std::vector<Vector> src{Vector(3), Vector(3)}, tgt{Vector(3), Vector(3)};
    src[0] << 1, 2, 0;
    src[1] << 0, 1, 3;
    tgt[0] << 2, 0, 1;
    tgt[1] << 1, 1, 1;
    const int base = ensemble_predict(src, tgt, s).label;
    for (auto& v : src) v *= 7.5;
    for (auto& v : tgt) v *= 7.5;
    CHECK(ensemble_predict(src, tgt, s).label == base);
  }
}

TEST_CASE("hedge_update hand values") {
  SUBCASE("all-zero indicators leave weights unchanged") {
    EnsembleState s(2, 0.5);
    const auto u0 = s.u();
    s.update({{0, 0}, {0, 0}, false});
    for (int i = 0; i < 2; ++i) CHECK(s.u()[i] == doctest::Approx(u0[i]));
  }
  SUBCASE("n=1 beta 0.5 source mistake") {
    EnsembleState s(1, 0.5);
    s.update({{1}, {0}, false});
    CHECK(s.u()[0] == doctest::Approx(1.0 / 3.0));
    CHECK(s.v()[0] == doctest::Approx(2.0 / 3.0));
  }
  SUBCASE("mistaken expert falls below its peer") {
    EnsembleState s(2, 0.8);
    s.update({{1, 0}, {0, 0}, false});
    CHECK(s.u()[0] < s.u()[1]);
  }
}

TEST_CASE("normalization and positivity over random sequences") {
  Rng rng(1234);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + rng.uniform_int(4);
    const int T = 100 + rng.uniform_int(400);
    EnsembleState s(n, 0.3 + 0.6 * rng.uniform());
    for (int t = 0; t < T; ++t) {
      RoundOutcome o;
      for (int i = 0; i < n; ++i) {
        o.z.push_back(rng.uniform() < 0.5);
        o.r.push_back(rng.uniform() < 0.5);
      }
      s.update(o);
      CHECK(weight_sum(s) == doctest::Approx(1.0).epsilon(1e-12));
      for (double w : s.u()) CHECK(w > 0.0);
      for (double w : s.v()) CHECK(w > 0.0);
    }
  }
}

TEST_CASE("log-space weights survive long streams with a hopeless expert") {
  EnsembleState s(1, 0.5);
  for (int t = 0; t < 5000; ++t) s.update({{1}, {0}, false});
  CHECK(s.u()[0] >= 0.0);
  CHECK(s.v()[0] == doctest::Approx(1.0));
  CHECK(std::isfinite(weight_sum(s)));
}

TEST_CASE("permutation equivariance of expert order") {
  RoundOutcome o1{{1, 0, 1}, {0, 1, 0}, false};
  RoundOutcome o2{{0, 1, 1}, {1, 0, 0}, false};  // experts 0 and 1 swapped
  EnsembleState a(3, 0.6), b(3, 0.6);
  a.update(o1);
  b.update(o2);
  CHECK(a.u()[0] == doctest::Approx(b.u()[1]));
  CHECK(a.u()[1] == doctest::Approx(b.u()[0]));
  CHECK(a.u()[2] == doctest::Approx(b.u()[2]));
  CHECK(a.v()[0] == doctest::Approx(b.v()[1]));
}

TEST_CASE("mistake_bound values") {
  CHECK(mistake_bound(0, 1) == doctest::Approx(std::log(2.0)));
  // 100 + 1.5*sqrt(ln4 * 100) + ln4
  const double ln4 = std::log(4.0);
  CHECK(mistake_bound(100, 2) ==
        doctest::Approx(100.0 + 1.5 * std::sqrt(ln4 * 100.0) + ln4));
  for (long m : {0L, 5L, 1000L}) {
    CHECK(mistake_bound(m, 3) >= static_cast<double>(m));
  }
}

TEST_CASE("Theorem-style bound holds for the indicator-loss Hedge abstraction") {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = std::vector<int>{1, 2, 4}[rng.uniform_int(3)];
    const int T = (trial % 2 == 0) ? 100 : 1000;

    std::vector<std::vector<int>> z(T, std::vector<int>(n));
    std::vector<std::vector<int>> r(T, std::vector<int>(n));
    // experts with differing error probabilities
    std::vector<double> pz(n), pr(n);
    for (int i = 0; i < n; ++i) {
      pz[i] = 0.1 + 0.8 * rng.uniform();
      pr[i] = 0.1 + 0.8 * rng.uniform();
    }
    for (int t = 0; t < T; ++t) {
      for (int i = 0; i < n; ++i) {
        z[t][i] = rng.uniform() < pz[i];
        r[t][i] = rng.uniform() < pr[i];
      }
    }
    // first pass: hindsight best expert
    long m_min = T;
    for (int i = 0; i < n; ++i) {
      long mz = 0, mr = 0;
      for (int t = 0; t < T; ++t) {
        mz += z[t][i];
        mr += r[t][i];
      }
      m_min = std::min({m_min, mz, mr});
    }
    const double beta = theorem_beta(m_min, n);
    const double M = run_hedge_weighted_loss(z, r, beta);
    CHECK(M <= mistake_bound(m_min, n) + 1e-9);
  }
}

TEST_CASE("stream_beta matches its formula") {
  const double expected = std::sqrt(70.0) / (std::sqrt(70.0) + std::sqrt(std::log(2.0)));
  CHECK(stream_beta(70) == doctest::Approx(expected));
  CHECK(stream_beta(1) > 0.0);
  CHECK(stream_beta(1) < 1.0);
}
