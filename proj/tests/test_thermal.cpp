#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "xylab/errors.hpp"
#include "xylab/gm_opt.hpp"
#include "xylab/thermal.hpp"

using namespace xylab;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double log_z_from_levels(const std::vector<double>& levels, double t) {
  const double e0 = *std::min_element(levels.begin(), levels.end());
  double s = 0.0;
  for (double e : levels) s += std::exp(-(e - e0) / t);
  return -e0 / t + std::log(s);
}

const std::vector<std::pair<double, double>> kGrid = {{0.0, 1.0}, {0.3, 0.5}, {0.6, 0.8}, {1.0, 0.5},
                                                      {0.5, 0.0}, {1.5, 0.0}, {2.0, 0.5}, {0.9, -0.3}};

}  // namespace

TEST_CASE("partition function limits") {
  const PopulationModel m(ModelParams::make(0.7, 0.4, 8));
  CHECK(rel(partition_function(m, 1e6), 256.0) < 1e-4);
  const double t = m.delta() / 50;
  CHECK(std::abs(m.log_partition_function(t) - (-m.e0() / t + std::log(m.d0()))) < 1e-8);
  CHECK_THROWS_AS(partition_function(m, 0.0), ParameterError);
  CHECK_THROWS_AS(partition_function(m, -1.0), ParameterError);
}

TEST_CASE("free-fermion Z matches the oracle spectrum") {
  for (auto [h, eta] : kGrid) {
    const auto levels = oracle::all_levels(oracle::hamiltonian(6, h, eta));
    const PopulationModel m(ModelParams::make(h, eta, 6));
    for (double t : {0.1, 0.5, 1.0, 5.0}) {
      CAPTURE(h);
      CAPTURE(eta);
      CAPTURE(t);
      CHECK(rel(m.log_partition_function(t), log_z_from_levels(levels, t)) < 1e-10);
    }
  }
}

TEST_CASE("dense and free-fermion methods agree") {
  for (int n : {4, 6, 8, 10}) {
    for (auto [h, eta] : kGrid) {
      const ModelParams p = ModelParams::make(h, eta, n);
      const PopulationModel ff(p, PopulationMethod::free_fermion);
      const PopulationModel ed(p, PopulationMethod::dense_ed);
      CHECK(ff.d0() == ed.d0());
      for (double t : {0.1, 0.5, 1.0, 5.0}) {
        CHECK(rel(partition_function(ff, t), partition_function(ed, t)) < 1e-10);
        CHECK(rel(ground_population(ff, t), ground_population(ed, t)) < 1e-10);
      }
    }
  }
}

TEST_CASE("ground population limits and golden value") {
  const PopulationModel unique(ModelParams::make(2.0, 0.5, 8));
  REQUIRE(unique.d0() == 1);
  CHECK(ground_population(unique, 1e-3) == doctest::Approx(1.0).epsilon(1e-12));
  const PopulationModel doublet(ModelParams::make(0.0, 1.0, 8));
  REQUIRE(doublet.d0() == 2);
  CHECK(ground_population(doublet, 1e-3) == doctest::Approx(0.5).epsilon(1e-12));

  const PopulationModel ed(ModelParams::make(2.0, 0.5, 10), PopulationMethod::dense_ed);
  const PopulationModel ff(ModelParams::make(2.0, 0.5, 10));
  const double golden = 0.96574410747167605;
  CHECK(rel(ground_population(ed, 0.5), golden) < 1e-10);
  CHECK(rel(ground_population(ff, 0.5), golden) < 1e-10);
}

TEST_CASE("ground population is strictly decreasing") {
  for (auto [h, eta] : kGrid) {
    const PopulationModel m(ModelParams::make(h, eta, 12));
    double prev = 2.0;
    for (double t = 0.2; t < 20; t *= 1.3) {
      const double p = ground_population(m, t);
      CHECK(p < prev);
      prev = p;
    }
  }
}

TEST_CASE("population exponent") {
  for (int n : {100, 1000}) {
    for (double h : {0.2, 0.7, 1.0, 1.5, 3.0}) {
      for (double eta : {0.2, 0.6, 1.0}) {
        const PopulationModel m(ModelParams::make(h, eta, n));
        double prev = 0.0;
        for (double t : {0.2, 0.5, 1.0, 2.0}) {
          const double mu = population_exponent(m, t);
          const ExponentBounds b = population_exponent_bounds(h, eta, t);
          // every mode energy is at most 2(h+1)
          const double lower = std::log2(1.0 + std::exp(-2.0 * (h + 1.0) / t));
          CHECK(mu > prev);
          CHECK(mu <= b.upper * (1 + 1e-9));
          CHECK(mu >= lower * (1 - 1e-9));
          prev = mu;
        }
      }
    }
  }
  const PopulationModel strong(ModelParams::make(50.0, 0.5, 100));
  CHECK(population_exponent(strong, 0.5) < 1e-40);
  const ExponentBounds b = population_exponent_bounds(2.0, 0.5, 0.5);
  CHECK(b.lower == doctest::Approx(std::log2(1 + std::exp(-6.0))));
  CHECK(b.upper == doctest::Approx(std::log2(1 + std::exp(-gap_bound_delta(2.0, 0.5) / 0.5))));
}

TEST_CASE("threshold temperature") {
  const PopulationModel m(ModelParams::make(2.0, 0.5, 12));
  const ThresholdResult zero = threshold_temperature(m, 0.0);
  CHECK(zero.t_th == 0.0);
  CHECK(zero.separable);

  const double g = gm_of_ground_state(ModelParams::make(2.0, 0.5, 12)).g_bits;
  const ThresholdResult r = threshold_temperature(m, g);
  CHECK(r.residual < 1e-10);
  CHECK(std::abs(ground_population(m, r.t_th) - std::exp2(-g)) < 1e-10);
  CHECK(r.lo <= r.t_th);
  CHECK(r.t_th <= r.hi);
  CHECK(r.d0 == 1);
  CHECK_FALSE(r.vacuous);
  CHECK(std::abs(r.t_th - 0.5340597) < 1e-6);

  // a doublet cannot witness below one bit
  const PopulationModel doublet(ModelParams::make(0.0, 1.0, 8));
  const ThresholdResult v = threshold_temperature(doublet, 0.5);
  CHECK(v.vacuous);
  CHECK(v.t_th == 0.0);
  const ThresholdResult w = threshold_temperature(doublet, 1.5);
  CHECK_FALSE(w.vacuous);
  CHECK(w.t_th > 0.0);

  CHECK_THROWS_AS(threshold_temperature(m, -1.0), ParameterError);
  ThresholdOptions tight;
  tight.t_max = 2.0;
  CHECK_THROWS_AS(threshold_temperature(m, 11.9, tight), RangeError);
}

TEST_CASE("gapped threshold") {
  const PopulationModel m(ModelParams::make(2.0, 0.5, 10));
  const double g = 0.05;
  const double plain = threshold_temperature(m, g).t_th;
  double prev = 0.0;
  for (double d : {0.01, 0.1, 1.0, 3.0}) {
    const ThresholdResult r = gapped_threshold(m, g, d);
    CHECK(r.kind == ThresholdKind::gapped);
    CHECK(r.t_th < plain);
    CHECK(r.t_th > prev);
    CHECK(r.residual < 1e-10);
    prev = r.t_th;
  }
  CHECK(rel(gapped_threshold(m, g, 1e4).t_th, plain) < 1e-8);
  CHECK_THROWS_AS(gapped_threshold(m, g, 0.0), ParameterError);
}

TEST_CASE("W-state population") {
  const WStateModel w{10, 1.0, 1.0};
  double sum = 0.0;
  for (int k = 0; k < 1024; ++k) sum += std::exp(-k);
  CHECK(rel(wstate_population(w, 1.0), 1.0 / sum) < 1e-14);
  CHECK(wstate_population({3, 1.0, 1.0}, 1e-3) == doctest::Approx(1.0));
  CHECK(rel(wstate_population({3, 1.0, 1.0}, 1e8), 1.0 / 8) < 1e-6);
  CHECK(w.d_total() == 1024.0);
  CHECK_THROWS_AS(WStateModel({1, 1.0, 1.0}).validate(), ParameterError);
  CHECK_THROWS_AS(WStateModel({3, -1.0, 1.0}).validate(), ParameterError);
  CHECK_THROWS_AS(WStateModel({3, 1.0, 0.0}).validate(), ParameterError);
}

TEST_CASE("W-state geometric measure") {
  CHECK(wstate_gm(2) == doctest::Approx(1.0));
  CHECK(std::abs(wstate_gm(3) - 1.16993) < 1e-5);
  CHECK(std::abs(wstate_gm(3) - geometric_measure(GroundSupport({SpinState(3, oracle::w_state(3))})).g_bits) < 1e-6);
  CHECK(std::abs(wstate_gm(1000) - 1.0 / std::log(2.0)) < 1e-3);
}

TEST_CASE("W-state gapped thresholds") {
  const double limit = 1.0 / std::log(std::exp(1.0) / (std::exp(1.0) - 1.0));
  CHECK(std::abs(limit - 2.1802) < 1e-4);
  CHECK(rel(wstate_gapped_threshold_tdl(1e6, 1.0), limit) < 1e-5);
  CHECK(rel(wstate_gapped_threshold_tdl(1e6, 3.0), 3.0 * limit) < 1e-5);
  // kappa = 1: (1 - e^{-1/T})^2 = 1/e
  CHECK(rel(wstate_gapped_threshold_tdl(1.0, 1.0), -1.0 / std::log(1.0 - std::exp(-0.5))) < 1e-10);

  double prev = 0.0;
  for (double k = 0.05; k < 100; k *= 1.5) {
    const double t = wstate_gapped_threshold_tdl(k, 1.0);
    CHECK(t > prev);
    CHECK(t < limit);
    prev = t;
  }
  CHECK(wstate_gapped_threshold_tdl(1e-4, 1.0) < 0.1);

  // finite m converges to the limit
  double err_prev = 1.0;
  for (int m : {4, 8, 16}) {
    const double err = std::abs(wstate_gapped_threshold({m, 1.0, 2.0}) - wstate_gapped_threshold_tdl(2.0, 1.0));
    CHECK(err < err_prev);
    err_prev = err;
  }
  CHECK_THROWS_AS(wstate_gapped_threshold_tdl(0.0, 1.0), ParameterError);
}

TEST_CASE("bisection") {
  const BisectionResult r = bisect_decreasing([](double x) { return 1.0 / x; }, 0.25, 1e-6, 1.0, 1e6, 400);
  CHECK(r.root == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(r.lo <= 4.0);
  CHECK(r.hi >= 4.0);
  CHECK_THROWS_AS(bisect_decreasing([](double x) { return 1.0 / x; }, 1e-9, 1e-6, 1.0, 1e3, 400), RangeError);
}
