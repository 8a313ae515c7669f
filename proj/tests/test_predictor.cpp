#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "socialpec/predictor.hpp"

#include "helpers.hpp"

using namespace socialpec;

namespace {


// Always predicts half a meter straight ahead with negligible spread.
class StepAheadPredictor final : public LocPredictor {
 public:
  GaussianParams predict(const SceneWindow&, std::size_t) const override {
    GaussianParams g;
    g.mu = {0.5, 0.0};
    g.sxx = 1e-18;
    g.syy = 1e-18;
    g.sxy = 0.0;
    return g;
  }
};

SceneWindow straight_walker(std::size_t t_obs, double step = 0.3) {
  SceneWindow w(1, t_obs, t_obs);
  w.ped_ids = {7};
  for (std::size_t t = 0; t < t_obs; ++t) {
    w.set(0, t, {step * static_cast<double>(t), 1.0});
  }
  return w;
}

}  // namespace

TEST_CASE("sampled moments match the distribution") {
  GaussianParams g;  // standard normal
  RngStream rng(3);
  const int n = 100000;
  double mx = 0, my = 0, cxx = 0, cyy = 0, cxy = 0;
  for (int i = 0; i < n; ++i) {
    State s = sample_location(g, rng);
    mx += s.x;
    my += s.y;
    cxx += s.x * s.x;
    cyy += s.y * s.y;
    cxy += s.x * s.y;
  }
  mx /= n;
  my /= n;
  CHECK(std::abs(mx) < 0.02);
  CHECK(std::abs(my) < 0.02);
  CHECK(std::abs(cxx / n - mx * mx - 1.0) < 0.02);
  CHECK(std::abs(cyy / n - my * my - 1.0) < 0.02);
  CHECK(std::abs(cxy / n - mx * my) < 0.02);
}

TEST_CASE("sampling reproduces correlated covariances") {
  GaussianParams g;
  g.mu = {1.0, -2.0};
  g.sxx = 4.0;
  g.sxy = 3.0;
  g.syy = 9.0;
  RngStream rng(5);
  const int n = 100000;
  double mx = 0, my = 0, cxx = 0, cyy = 0, cxy = 0;
  for (int i = 0; i < n; ++i) {
    State s = sample_location(g, rng);
    mx += s.x;
    my += s.y;
    cxx += s.x * s.x;
    cyy += s.y * s.y;
    cxy += s.x * s.y;
  }
  mx /= n;
  my /= n;
  CHECK(std::abs(mx - 1.0) < 0.05);
  CHECK(std::abs(my + 2.0) < 0.05);
  CHECK(std::abs(cxx / n - mx * mx - 4.0) < 0.1);
  CHECK(std::abs(cyy / n - my * my - 9.0) < 0.15);
  CHECK(std::abs(cxy / n - mx * my - 3.0) < 0.1);
}

TEST_CASE("a replayed stream gives the identical draw") {
  GaussianParams g;
  RngStream a = RngStream::keyed({11, 2, 3, 4});
  RngStream b = RngStream::keyed({11, 2, 3, 4});
  State sa = sample_location(g, a);
  State sb = sample_location(g, b);
  CHECK(sa.x == sb.x);
  CHECK(sa.y == sb.y);
}

TEST_CASE("rollout with zero horizon is empty") {
  StepAheadPredictor stub;
  RolloutConfig cfg;
  cfg.t_pred = 0;
  cfg.num_rollouts = 2;
  Tensor out = rollout(stub, straight_walker(8), cfg);
  CHECK(out.shape() == std::vector<std::size_t>{2, 1, 0, 2});
}

TEST_CASE("rollout rejects too-short observations") {
  StepAheadPredictor stub;
  SceneWindow w = straight_walker(8);
  w.t_obs = 10;  // claims more observed steps than the window holds
  CHECK_THROWS_AS(rollout(stub, w, RolloutConfig{}), InvalidInputError);
}

TEST_CASE("stub model advances half a meter per step along the heading") {
  StepAheadPredictor stub;
  RolloutConfig cfg;
  cfg.mode = RolloutMode::mean;
  cfg.t_pred = 5;
  SceneWindow w = straight_walker(8, 0.3);  // heads +x, ends at x = 2.1
  Tensor out = rollout(stub, w, cfg);
  for (std::size_t t = 0; t < 5; ++t) {
    CHECK(out[t * 2] == doctest::Approx(2.1 + 0.5 * static_cast<double>(t + 1)).epsilon(1e-9));
    CHECK(out[t * 2 + 1] == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("mean mode ignores K: all rollouts identical") {
  ModelConfig cfg = testutil::tiny_config();
  LocationPredictorModel model = LocationPredictorModel::init(cfg, 7);
  ModelLocPredictor predictor(model);
  RngStream rng(11);
  SceneWindow obs = testutil::random_walk_window(3, 8, 8, rng);
  RolloutConfig rc;
  rc.mode = RolloutMode::mean;
  rc.num_rollouts = 4;
  rc.t_pred = 6;
  Tensor out = rollout(predictor, obs, rc);
  const std::size_t per_k = 3 * 6 * 2;
  for (std::size_t k = 1; k < 4; ++k) {
    for (std::size_t i = 0; i < per_k; ++i) {
      CHECK(out[k * per_k + i] == out[i]);
    }
  }
}

TEST_CASE("relabeling pedestrians permutes the rollout bit-identically") {
  ModelConfig cfg = testutil::tiny_config();
  LocationPredictorModel model = LocationPredictorModel::init(cfg, 13);
  ModelLocPredictor predictor(model);
  RngStream rng(17);
  SceneWindow obs = testutil::random_walk_window(3, 8, 8, rng);
  obs.ped_ids = {101, 202, 303};

  RolloutConfig rc;
  rc.mode = RolloutMode::sample;
  rc.num_rollouts = 2;
  rc.t_pred = 6;
  rc.seed = 19;
  Tensor base = rollout(predictor, obs, rc);

  // Rotate rows 0 -> 1 -> 2 -> 0 together with their identities.
  SceneWindow permuted(3, 8, 8);
  const std::size_t perm[3] = {2, 0, 1};  // permuted row i = original row perm[i]
  permuted.ped_ids.resize(3);
  for (std::size_t i = 0; i < 3; ++i) {
    permuted.ped_ids[i] = obs.ped_ids[perm[i]];
    for (std::size_t t = 0; t < 8; ++t) permuted.set(i, t, obs.at(perm[i], t));
  }
  Tensor moved = rollout(predictor, permuted, rc);

  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t t = 0; t < 6; ++t) {
        for (std::size_t d = 0; d < 2; ++d) {
          CHECK(moved[((k * 3 + i) * 6 + t) * 2 + d] ==
                base[((k * 3 + perm[i]) * 6 + t) * 2 + d]);
        }
      }
    }
  }
}

TEST_CASE("mean-mode rollout is equivariant to scene translation and rotation") {
  ModelConfig cfg = testutil::tiny_config();
  LocationPredictorModel model = LocationPredictorModel::init(cfg, 23);
  ModelLocPredictor predictor(model);
  RngStream rng(29);
  SceneWindow obs = testutil::random_walk_window(3, 8, 8, rng);

  const double angle = 1.234;
  const State shift{4.2, -7.5};
  SceneWindow moved = obs;
  for (std::size_t m = 0; m < 3; ++m) {
    for (std::size_t t = 0; t < 8; ++t) {
      State s = obs.at(m, t);
      moved.set(m, t,
                {std::cos(angle) * s.x - std::sin(angle) * s.y + shift.x,
                 std::sin(angle) * s.x + std::cos(angle) * s.y + shift.y});
    }
  }

  RolloutConfig rc;
  rc.mode = RolloutMode::mean;
  rc.num_rollouts = 1;
  rc.t_pred = 8;
  Tensor base = rollout(predictor, obs, rc);
  Tensor transformed = rollout(predictor, moved, rc);

  double worst = 0.0;
  for (std::size_t m = 0; m < 3; ++m) {
    for (std::size_t t = 0; t < 8; ++t) {
      const double bx = base[(m * 8 + t) * 2];
      const double by = base[(m * 8 + t) * 2 + 1];
      const double ex = std::cos(angle) * bx - std::sin(angle) * by + shift.x;
      const double ey = std::sin(angle) * bx + std::cos(angle) * by + shift.y;
      worst = std::max({worst, std::abs(transformed[(m * 8 + t) * 2] - ex),
                        std::abs(transformed[(m * 8 + t) * 2 + 1] - ey)});
    }
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("sampled rollouts differ across k but stay deterministic") {
  ModelConfig cfg = testutil::tiny_config();
  LocationPredictorModel model = LocationPredictorModel::init(cfg, 31);
  ModelLocPredictor predictor(model);
  RngStream rng(37);
  SceneWindow obs = testutil::random_walk_window(2, 8, 8, rng);
  RolloutConfig rc;
  rc.num_rollouts = 3;
  rc.t_pred = 4;
  rc.seed = 41;
  Tensor a = rollout(predictor, obs, rc);
  Tensor b = rollout(predictor, obs, rc);
  bool any_diff_across_k = false;
  for (std::size_t i = 0; i < a.numel(); ++i) {
    CHECK(a[i] == b[i]);
    const std::size_t per_k = 2 * 4 * 2;
    if (i >= per_k && a[i] != a[i % per_k]) any_diff_across_k = true;
  }
  CHECK(any_diff_across_k);
}
