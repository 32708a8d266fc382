#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "xylab/errors.hpp"
#include "xylab/gm_opt.hpp"

using namespace xylab;

namespace {

SpinState state_of(const Eigen::VectorXcd& v) {
  return SpinState(static_cast<int>(std::log2(static_cast<double>(v.size())) + 0.5), v);
}

double g_of(const Eigen::VectorXcd& v, const GMOptions& opts = {}) {
  return geometric_measure(GroundSupport({state_of(v)}), opts).g_bits;
}

// Max over symmetric product states (c, s e^{i phi})^{x m} on a fine grid.
double symmetric_grid_max(const Eigen::VectorXcd& psi, int m) {
  double best = 0.0;
  for (int i = 0; i <= 720; ++i) {
    for (int j = 0; j < 72; ++j) {
      const double t = std::numbers::pi / 2 * i / 720.0;
      const Spinor s(std::cos(t), std::polar(std::sin(t), 2 * std::numbers::pi * j / 72.0));
      const SpinState phi = product_state(std::vector<Spinor>(m, s));
      best = std::max(best, std::norm(phi.amplitudes().dot(psi)));
    }
  }
  return best;
}

SpinState apply_local_unitaries(const SpinState& psi, const std::vector<Eigen::Matrix2cd>& us) {
  Eigen::VectorXcd a = psi.amplitudes();
  const int n = psi.n();
  for (int j = 0; j < n; ++j) {
    const std::uint64_t bit = std::uint64_t{1} << site_bit(n, j);
    for (std::uint64_t s = 0; s < a.size(); ++s) {
      if (s & bit) continue;
      const cplx a0 = a(s);
      const cplx a1 = a(s | bit);
      a(s) = us[j](0, 0) * a0 + us[j](0, 1) * a1;
      a(s | bit) = us[j](1, 0) * a0 + us[j](1, 1) * a1;
    }
  }
  return SpinState(n, a);
}

}  // namespace

TEST_CASE("objective examples") {
  const ProductState p = ProductState::uniform(4, Spinor(0.6, cplx(0.0, 0.8)));
  CHECK(objective(GroundSupport({p.to_state()}), p) == doctest::Approx(1.0).epsilon(1e-14));

  const GroundSupport w3({state_of(oracle::w_state(3))});
  CHECK(objective(w3, ProductState::uniform(3, Spinor(1.0, 0.0))) == doctest::Approx(0.0));

  const auto [tp, tm, perp] = c_line_states(0.8, 8);
  const GroundSupport rho0({tp, perp});
  ProductState theta_plus;
  theta_plus.spinors.assign(8, Spinor(std::sin(0.5 * std::acos(1.0 / 3.0)), std::cos(0.5 * std::acos(1.0 / 3.0))));
  CHECK(objective(rho0, theta_plus) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("product overlap by contraction equals the dense inner product") {
  std::mt19937_64 rng(3);
  const Eigen::VectorXcd psi = oracle::random_state(5, rng);
  ProductState p;
  std::normal_distribution<double> g;
  for (int j = 0; j < 5; ++j) p.spinors.push_back(Spinor(cplx(g(rng), g(rng)), cplx(g(rng), g(rng))).normalized());
  const cplx ref = p.to_state().amplitudes().dot(psi);
  CHECK(std::abs(product_overlap(p, state_of(psi)) - ref) < 1e-14);
  CHECK_THROWS_AS(product_overlap(ProductState::uniform(4, Spinor(1, 0)), state_of(psi)), ParameterError);
}

TEST_CASE("site updates never decrease the objective") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + trial % 4;
    std::vector<SpinState> states = {state_of(oracle::random_state(n, rng))};
    if (trial % 2) {
      // second orthonormal vector
      Eigen::VectorXcd v = oracle::random_state(n, rng);
      v -= states[0].amplitudes().dot(v) * states[0].amplitudes();
      states.push_back(SpinState(n, v.normalized()));
    }
    const GroundSupport sup(states);
    ProductState phi;
    for (int j = 0; j < n; ++j) phi.spinors.push_back(Spinor(cplx(g(rng), g(rng)), cplx(g(rng), g(rng))).normalized());
    double prev = objective(sup, phi);
    for (int sweep = 0; sweep < 5; ++sweep) {
      std::vector<double> trace;
      phi = site_sweep(sup, phi, &trace);
      for (double v : trace) {
        CHECK(v >= prev - 1e-14);
        prev = v;
      }
      CHECK(objective(sup, phi) == doctest::Approx(trace.back()).epsilon(1e-12));
    }
  }
}

TEST_CASE("GHZ and W fixed points") {
  const GMResult ghz4 = geometric_measure(GroundSupport({state_of(oracle::ghz_state(4))}));
  CHECK(ghz4.lambda_sq == doctest::Approx(symmetric_grid_max(oracle::ghz_state(4), 4)).epsilon(1e-6));
  CHECK(ghz4.lambda_sq == doctest::Approx(0.5).epsilon(1e-10));

  const GMResult w3 = geometric_measure(GroundSupport({state_of(oracle::w_state(3))}));
  CHECK(w3.lambda_sq == doctest::Approx(symmetric_grid_max(oracle::w_state(3), 3)).epsilon(1e-5));
  CHECK(w3.g_bits == doctest::Approx(std::exp2(-0.0) * 2 * std::log2(1.5)).epsilon(1e-9));
  CHECK(std::abs(w3.g_bits - 1.16993) < 1e-5);
  CHECK(w3.g_bits == doctest::Approx(-std::log2(w3.lambda_sq)).epsilon(1e-12));
}

TEST_CASE("W states match (m-1) log2(m/(m-1))") {
  for (int m = 2; m <= 6; ++m) {
    CHECK(std::abs(g_of(oracle::w_state(m)) - (m - 1) * std::log2(double(m) / (m - 1))) < 1e-6);
  }
}

TEST_CASE("brute force agreement on two and three qubits") {
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<Eigen::VectorXcd> states;
  Eigen::VectorXcd bell(4);
  bell << r, 0, 0, r;
  states.push_back(bell);
  states.push_back(oracle::ghz_state(3));
  states.push_back(oracle::w_state(3));
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 10; ++k) states.push_back(oracle::random_state(2, rng));
  for (int k = 0; k < 10; ++k) states.push_back(oracle::random_state(3, rng));

  for (const auto& psi : states) {
    const double ref = psi.size() == 4 ? oracle::max_overlap_2q(psi) : oracle::max_overlap_3q(psi);
    CHECK(std::abs(g_of(psi) - (-std::log2(ref))) < 1e-4);
  }
}

TEST_CASE("product states are separable") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  ProductState p;
  for (int j = 0; j < 6; ++j) p.spinors.push_back(Spinor(cplx(g(rng), g(rng)), cplx(g(rng), g(rng))).normalized());
  CHECK(g_of(p.to_state().amplitudes()) < 1e-10);
}

TEST_CASE("XX chain above saturation is separable") {
  for (double h : {1.5, 2.0, 5.0}) {
    const GMResult r = gm_of_ground_state(ModelParams::make(h, 0.0, 8));
    CHECK(r.g_bits < 1e-8);
    CHECK(r.d0 == 1);
  }
}

TEST_CASE("Ising doublet is at most one bit") {
  const GMResult r = gm_of_ground_state(ModelParams::make(0.0, 1.0, 8));
  CHECK(r.d0 == 2);
  CHECK(r.g_bits <= 1.0 + 1e-6);
  // |+x...+x> reaches 1/2
  const GroundSupport sup = ground_support(ModelParams::make(0.0, 1.0, 8));
  const ProductState plus_x = ProductState::uniform(8, Spinor(1.0, 1.0) / std::sqrt(2.0));
  CHECK(objective(sup, plus_x) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("eta -> -eta leaves G unchanged") {
  for (auto [h, eta] : {std::pair{0.3, 0.5}, {0.9, 0.2}, {1.4, 0.7}, {0.6, 0.8}}) {
    const double a = gm_of_ground_state(ModelParams::make(h, eta, 8)).g_bits;
    const double b = gm_of_ground_state(ModelParams::make(h, -eta, 8)).g_bits;
    CHECK(std::abs(a - b) < 2e-6);
  }
}

TEST_CASE("local unitaries do not change G") {
  std::mt19937_64 rng(99);
  for (auto [h, eta, n] : {std::tuple{0.4, 0.6, 8}, {1.2, 0.5, 10}, {0.6, 0.8, 8}}) {
    const GroundSupport sup = ground_support(ModelParams::make(h, eta, n));
    std::vector<Eigen::Matrix2cd> us;
    for (int j = 0; j < n; ++j) us.push_back(oracle::random_unitary(rng));
    std::vector<SpinState> rotated;
    for (const SpinState& s : sup.states()) rotated.push_back(apply_local_unitaries(s, us));
    const double g0 = geometric_measure(sup).g_bits;
    const double g1 = geometric_measure(GroundSupport(rotated)).g_bits;
    CAPTURE(h);
    CHECK(std::abs(g0 - g1) < 1e-6);
  }
}

TEST_CASE("mixed support bound") {
  for (auto [h, eta] : {std::pair{0.0, 1.0}, {0.6, 0.8}, {0.2, 0.9}}) {
    const GroundSupport sup = ground_support(ModelParams::make(h, eta, 10));
    REQUIRE(sup.rank() == 2);
    const double mixed = geometric_measure(sup).lambda_sq;
    double pure = 0.0;
    for (const SpinState& s : sup.states()) pure = std::max(pure, geometric_measure(GroundSupport({s})).lambda_sq);
    CHECK(mixed >= pure / 2 - 1e-12);
  }
}

TEST_CASE("restart stability") {
  for (auto [h, eta, n] : {std::tuple{0.5, 1.0, 12}, {0.3, 0.4, 10}, {0.95, 0.1, 12}, {1.3, 0.6, 12}}) {
    const GroundSupport sup = ground_support(ModelParams::make(h, eta, n));
    GMOptions few;
    few.restarts = 8;
    GMOptions many;
    many.restarts = 32;
    CHECK(std::abs(geometric_measure(sup, few).lambda_sq - geometric_measure(sup, many).lambda_sq) < 1e-7);
  }
}

TEST_CASE("G grows linearly with n in the ordered phase") {
  const double g12 = gm_of_ground_state(ModelParams::make(0.5, 1.0, 12)).g_bits;
  const double g16 = gm_of_ground_state(ModelParams::make(0.5, 1.0, 16)).g_bits;
  const double g20 = gm_of_ground_state(ModelParams::make(0.5, 1.0, 20)).g_bits;
  const double s1 = (g16 - g12) / 4;
  const double s2 = (g20 - g16) / 4;
  CHECK(s1 > 0);
  CHECK(std::abs(s2 - s1) < 0.05 * s1);
}

TEST_CASE("results are reproducible and independent of threads") {
  const GroundSupport sup = ground_support(ModelParams::make(0.7, 0.3, 10));
  GMOptions a;
  a.seed = 7;
  GMOptions b = a;
  b.threads = 4;
  const GMResult ra = geometric_measure(sup, a);
  const GMResult rb = geometric_measure(sup, b);
  const GMResult rc = geometric_measure(sup, a);
  CHECK(ra.lambda_sq == rb.lambda_sq);
  CHECK(ra.lambda_sq == rc.lambda_sq);
  CHECK(ra.best_start == rb.best_start);
  for (int j = 0; j < 10; ++j) CHECK(ra.best.spinors[j] == rb.best.spinors[j]);
  CHECK(ra.restarts_used == a.restarts + 2);
  CHECK(ra.converged);
}

TEST_CASE("robustness lower bound") {
  CHECK(robustness_lower_bound(0.0, 1).value == 0.0);
  CHECK(robustness_lower_bound(0.0, 1).vacuous);
  CHECK(robustness_lower_bound(2 * std::log2(1.5), 1).value == doctest::Approx(1.25).epsilon(1e-12));
  CHECK_FALSE(robustness_lower_bound(2 * std::log2(1.5), 1).vacuous);
  const RobustnessBound b = robustness_lower_bound(0.5, 2);
  CHECK(b.value < 0.0);
  CHECK(b.vacuous);
  CHECK_THROWS_AS(robustness_lower_bound(0.5, 0), ParameterError);
}

TEST_CASE("support validation") {
  CHECK_THROWS_AS(GroundSupport({}), ParameterError);
  CHECK_THROWS_AS(GroundSupport({SpinState::basis(3, 0), SpinState::basis(3, 0)}), ParameterError);
  CHECK_THROWS_AS(GroundSupport({SpinState::basis(3, 0), SpinState::basis(4, 1)}), ParameterError);
  CHECK_THROWS_AS(geometric_measure(GroundSupport({SpinState::basis(3, 0)}), GMOptions{0}), ParameterError);
}
