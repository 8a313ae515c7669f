#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "socialpec/model.hpp"

#include "helpers.hpp"

using namespace socialpec;
using testutil::random_tensor;

namespace {

// Independent triple-loop oracle for the pattern extraction layer.
Tensor pec_brute_force(const Tensor& phi, const Tensor& patterns, const Tensor& lambda,
                       const Tensor& bias) {
  const std::size_t t_in = phi.extent(0);
  const std::size_t n = patterns.extent(0);
  const std::size_t len = patterns.extent(1);
  Tensor out({t_in - len + 1, n});
  for (std::size_t t = 0; t * 1 <= t_in - len; ++t) {
    for (std::size_t j = 0; j < n; ++j) {
      double sum = 0.0;
      for (std::size_t k = 0; k < len; ++k) {
        sum += std::hypot(phi.at(t + k, 0) - patterns.at(j, k, 0),
                          phi.at(t + k, 1) - patterns.at(j, k, 1));
      }
      out.at(t, j) = lambda[j] * std::log(1e-8 + sum) + bias[j];
    }
  }
  return out;
}

Tensor run_pec(const Tensor& phi, const Tensor& patterns, const Tensor& lambda,
               const Tensor& bias) {
  Tape tape;
  Var out = ops::pec(tape, tape.ref(phi), tape.ref(patterns), tape.ref(lambda), tape.ref(bias));
  return tape.val(out);
}

}  // namespace

TEST_CASE("pec matches the brute-force oracle on random instances") {
  RngStream rng(5);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t len = 1 + rng.below(4);
    const std::size_t t_in = len + rng.below(16 - len + 1);
    const std::size_t n = 1 + rng.below(16);
    Tensor phi = random_tensor({t_in, 2}, rng, -8.0, 8.0);
    Tensor patterns = random_tensor({n, len, 2}, rng, -8.0, 8.0);
    Tensor lambda = random_tensor({n}, rng, -2.0, 2.0);
    Tensor bias = random_tensor({n}, rng, -1.0, 1.0);
    Tensor got = run_pec(phi, patterns, lambda, bias);
    Tensor want = pec_brute_force(phi, patterns, lambda, bias);
    REQUIRE(got.same_shape(want));
    for (std::size_t i = 0; i < got.numel(); ++i) {
      worst = std::max(worst, std::abs(got[i] - want[i]));
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("similarity fixture: pec reverses the dot-product ordering") {
  // Trajectory {(10,1),(20,1)} against patterns p0={(10,0),(20,0)} and
  // p1={(50,0),(60,0)}: the conventional convolution scores p1 higher
  // (500 < 1700) even though p0 is the nearer pattern.
  Tensor phi({2, 2}, {10.0, 1.0, 20.0, 1.0});
  Tensor patterns({2, 2, 2}, {10.0, 0.0, 20.0, 0.0, 50.0, 0.0, 60.0, 0.0});
  Tensor lambda = Tensor::full({2}, -1.0);
  Tensor bias = Tensor::zeros({2});
  Tensor psi = run_pec(phi, patterns, lambda, bias);
  REQUIRE(psi.shape() == std::vector<std::size_t>{1, 2});
  // Distance sums: 2 and 2*sqrt(1601).
  CHECK(psi.at(0, 0) == doctest::Approx(-std::log(2.0 + 1e-8)).epsilon(1e-9));
  CHECK(psi.at(0, 0) == doctest::Approx(-0.6931).epsilon(1e-4));
  CHECK(psi.at(0, 1) == doctest::Approx(-std::log(2.0 * std::sqrt(1601.0) + 1e-8)).epsilon(1e-9));
  CHECK(psi.at(0, 1) == doctest::Approx(-4.3823).epsilon(1e-4));
  CHECK(psi.at(0, 0) > psi.at(0, 1));  // closer pattern scores higher
}

TEST_CASE("pec: zero scale pins the output at the bias") {
  RngStream rng(9);
  Tensor phi = random_tensor({5, 2}, rng);
  Tensor patterns = random_tensor({3, 2, 2}, rng);
  Tensor lambda = Tensor::zeros({3});
  Tensor bias({3}, {0.25, -1.5, 3.0});
  Tensor psi = run_pec(phi, patterns, lambda, bias);
  for (std::size_t t = 0; t < psi.extent(0); ++t) {
    for (std::size_t j = 0; j < 3; ++j) CHECK(psi.at(t, j) == bias[j]);
  }
}

TEST_CASE("pec: exact pattern match hits the epsilon floor") {
  Tensor phi({2, 2}, {0.3, -0.7, 1.1, 0.9});
  Tensor patterns({1, 2, 2}, {0.3, -0.7, 1.1, 0.9});
  Tensor psi = run_pec(phi, patterns, Tensor::full({1}, -1.0), Tensor::zeros({1}));
  CHECK(psi[0] == doctest::Approx(18.4207).epsilon(1e-5));
}

TEST_CASE("pec: translation of trajectory and patterns together is invariant") {
  RngStream rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    Tensor phi = random_tensor({6, 2}, rng, -3.0, 3.0);
    Tensor patterns = random_tensor({4, 2, 2}, rng, -3.0, 3.0);
    Tensor lambda = random_tensor({4}, rng, -2.0, -0.5);
    Tensor bias = random_tensor({4}, rng);
    const double vx = rng.uniform(-10.0, 10.0);
    const double vy = rng.uniform(-10.0, 10.0);
    Tensor phi2 = phi;
    for (std::size_t t = 0; t < phi.extent(0); ++t) {
      phi2.at(t, 0) += vx;
      phi2.at(t, 1) += vy;
    }
    Tensor patterns2 = patterns;
    for (std::size_t j = 0; j < 4; ++j) {
      for (std::size_t k = 0; k < 2; ++k) {
        patterns2.at(j, k, 0) += vx;
        patterns2.at(j, k, 1) += vy;
      }
    }
    Tensor a = run_pec(phi, patterns, lambda, bias);
    Tensor b = run_pec(phi2, patterns2, lambda, bias);
    for (std::size_t i = 0; i < a.numel(); ++i) {
      CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("encoder shape law: (2,8) -> (160,3) context and (80,3) target") {
  ModelConfig cfg;  // the published architecture
  LocationPredictorModel model = LocationPredictorModel::init(cfg, 3);
  RngStream rng(17);
  Tensor phi = random_tensor({2, 8}, rng, -4.0, 4.0);
  Tape tape;
  ModelVars vars = stage_frozen(tape, model);
  Var ctx = encode(tape, vars.context, cfg.context.pool, tape.ref(phi));
  Var tgt = encode(tape, vars.target, cfg.target.pool, tape.ref(phi));
  CHECK(tape.val(ctx).shape() == std::vector<std::size_t>{160, 3});
  CHECK(tape.val(tgt).shape() == std::vector<std::size_t>{80, 3});
  // tanh keeps every embedding entry inside (-1, 1)
  for (std::size_t i = 0; i < tape.val(ctx).numel(); ++i) {
    CHECK(std::abs(tape.val(ctx)[i]) < 1.0);
  }
  CHECK(cfg.mlp_input_width() == 720);
  CHECK(cfg.mlp_widths.back() == 5);
}

TEST_CASE("encoder shape law tracks t_obs") {
  ModelConfig cfg;
  // 8 -> 7 -> 4 -> 3 by the pipeline arithmetic
  CHECK(cfg.encoder_out_len(cfg.context) == 3);
  cfg.t_obs = 10;  // 10 -> 9 -> 5 -> 4
  CHECK(cfg.encoder_out_len(cfg.context) == 4);
}

TEST_CASE("pool_context semantics") {
  Tape tape;
  Var a = tape.constant(Tensor({1, 1}, {0.2}));
  Var b = tape.constant(Tensor({1, 1}, {0.7}));
  CHECK(tape.val(pool_context(tape, {a}, {1, 1}))[0] == 0.2);
  CHECK(tape.val(pool_context(tape, {a, b}, {1, 1}))[0] == 0.7);
  // Empty context: the -1 sentinel.
  const Tensor& empty = tape.val(pool_context(tape, {}, {2, 3}));
  CHECK(empty.shape() == std::vector<std::size_t>{2, 3});
  for (std::size_t i = 0; i < empty.numel(); ++i) CHECK(empty[i] == -1.0);
  // Idempotent on duplicates.
  RngStream rng(19);
  Tensor omega = random_tensor({4, 3}, rng);
  Var w1 = tape.ref(omega);
  const Tensor& once = tape.val(pool_context(tape, {w1}, {4, 3}));
  const Tensor& twice = tape.val(pool_context(tape, {w1, w1}, {4, 3}));
  for (std::size_t i = 0; i < once.numel(); ++i) CHECK(once[i] == twice[i]);
}

TEST_CASE("gaussian head examples") {
  GaussianParams unit = gaussian_head({0.5, 0.2, 0.0, 0.0, 0.0});
  CHECK(unit.mu.x == 0.5);
  CHECK(unit.mu.y == 0.2);
  CHECK(unit.sxx == 1.0);
  CHECK(unit.syy == 1.0);
  CHECK(unit.sxy == 0.0);

  GaussianParams g = gaussian_head({0.0, 0.0, std::log(2.0), std::log(3.0), std::atanh(0.5)});
  CHECK(g.sxx == doctest::Approx(4.0));
  CHECK(g.syy == doctest::Approx(9.0));
  CHECK(g.sxy == doctest::Approx(3.0));
  CHECK(g.det() == doctest::Approx(27.0));
}

TEST_CASE("gaussian head always yields a positive-definite covariance") {
  RngStream rng(21);
  for (int i = 0; i < 10000; ++i) {
    RawHeadOutput raw{rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(-50, 50),
                      rng.uniform(-50, 50), rng.uniform(-50, 50)};
    GaussianParams g = gaussian_head(raw);
    CHECK(g.det() > 0.0);
    CHECK(g.sxx > 0.0);
    CHECK(g.syy > 0.0);
  }
}

TEST_CASE("loc_predict handles an empty context") {
  ModelConfig cfg = testutil::tiny_config();
  LocationPredictorModel model = LocationPredictorModel::init(cfg, 29);
  RngStream rng(31);
  SceneWindow ego = testutil::random_walk_window(1, 8, 8, rng);
  GaussianParams g = loc_predict(model, ego, 0);
  CHECK(std::isfinite(g.mu.x));
  CHECK(g.det() > 0.0);
}

TEST_CASE("loc_predict covariance is positive definite on random windows") {
  ModelConfig cfg = testutil::tiny_config();
  LocationPredictorModel model = LocationPredictorModel::init(cfg, 37);
  RngStream rng(41);
  for (int i = 0; i < 25; ++i) {
    SceneWindow ego = testutil::random_walk_window(1 + rng.below(4), 8, 8, rng);
    GaussianParams g = loc_predict(model, ego, rng.below(ego.num_peds()));
    CHECK(g.det() > 0.0);
    CHECK(g.sxx > 0.0);
  }
}

TEST_CASE("loc_predict is invariant to context pedestrian order, bit for bit") {
  ModelConfig cfg = testutil::tiny_config();
  LocationPredictorModel model = LocationPredictorModel::init(cfg, 43);
  RngStream rng(47);
  SceneWindow ego = testutil::random_walk_window(5, 8, 8, rng);
  GaussianParams base = loc_predict(model, ego, 2);

  // Swap context pedestrians 0 and 4; the target stays row 2.
  SceneWindow permuted = ego;
  for (std::size_t t = 0; t < ego.t_total(); ++t) {
    permuted.set(0, t, ego.at(4, t));
    permuted.set(4, t, ego.at(0, t));
  }
  std::swap(permuted.ped_ids[0], permuted.ped_ids[4]);
  GaussianParams same = loc_predict(model, permuted, 2);

  CHECK(base.mu.x == same.mu.x);
  CHECK(base.mu.y == same.mu.y);
  CHECK(base.sxx == same.sxx);
  CHECK(base.sxy == same.sxy);
  CHECK(base.syy == same.syy);
}

TEST_CASE("loc_predict rejects a wrong-length window") {
  ModelConfig cfg = testutil::tiny_config();
  LocationPredictorModel model = LocationPredictorModel::init(cfg, 53);
  RngStream rng(59);
  SceneWindow ego = testutil::random_walk_window(2, 9, 8, rng);
  CHECK_THROWS_AS(loc_predict(model, ego, 0), DimensionError);
  SceneWindow ok = ego.slice_time(0, 8);
  CHECK_THROWS_AS(loc_predict(model, ok, 7), IndexError);
}

TEST_CASE("full predictor gradients match finite differences on a small architecture") {
  ModelConfig cfg = testutil::tiny_config();
  LocationPredictorModel model = LocationPredictorModel::init(cfg, 61);
  RngStream rng(67);
  SceneWindow w = testutil::random_walk_window(3, 9, 8, rng);

  auto build = [&](Tape& tape) {
    ModelVars vars = stage(tape, model);
    std::vector<Var> losses;
    SceneWindow obs = w.slice_time(0, 8);
    for (std::size_t m = 0; m < w.num_peds(); ++m) {
      auto [ego, frame] = convert(obs, m);
      State truth = frame.to_local(w.at(m, 8));
      losses.push_back(ops::gaussian_nll(tape, loc_predict_raw(tape, vars, cfg, ego, m), truth));
    }
    return ops::sum_list(tape, losses);
  };
  const double err = testutil::gradient_check(build, model.parameters(), 1e-5);
  CHECK(err < 1e-4);
}

TEST_CASE("model initialization is reproducible and within documented ranges") {
  ModelConfig cfg;
  LocationPredictorModel a = LocationPredictorModel::init(cfg, 71);
  LocationPredictorModel b = LocationPredictorModel::init(cfg, 71);
  auto pa = a.parameters();
  auto pb = b.parameters();
  REQUIRE(pa.size() == pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    REQUIRE(pa[i]->value.numel() == pb[i]->value.numel());
    for (std::size_t j = 0; j < pa[i]->value.numel(); ++j) {
      CHECK(pa[i]->value[j] == pb[i]->value[j]);
    }
  }
  // Pattern start points live in [-4,4]^2; lambda = -1; bias = 0.
  const Tensor& pat = a.context.patterns.value;
  for (std::size_t j = 0; j < pat.extent(0); ++j) {
    CHECK(std::abs(pat.at(j, 0, 0)) <= 4.0);
    CHECK(std::abs(pat.at(j, 0, 1)) <= 4.0);
  }
  for (std::size_t j = 0; j < a.context.lambda.value.numel(); ++j) {
    CHECK(a.context.lambda.value[j] == -1.0);
    CHECK(a.context.bias.value[j] == 0.0);
  }
}
