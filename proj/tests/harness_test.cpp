#include "bspsa/harness.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace bspsa;

TEST_CASE("initial_offsets start at the requested total loss") {
  Rng rng(1);
  for (int n : {1, 4, 16, 64}) {
    const auto l = QuadraticLandscape::uniform(n, 0.01, 0.82);
    const Vectord theta = initial_offsets(n, 2.0, l.curvatures, rng);
    CHECK(elo_loss(l, theta) == doctest::Approx(2.0).epsilon(1e-12));
    for (Eigen::Index i = 0; i < n; ++i) {
      CHECK(std::abs(theta(i)) == doctest::Approx(std::sqrt(2.0 / n / 0.01)).epsilon(1e-14));
    }
  }
  const Vectord a{{0.01, 1.0}};
  const Vectord theta = initial_offsets(2, 2.0, a, rng);
  CHECK(0.01 * theta(0) * theta(0) == doctest::Approx(1.0));
  CHECK(theta(1) * theta(1) == doctest::Approx(1.0));
  CHECK_THROWS(initial_offsets(0, 2.0, Vectord(), rng));
}

TEST_CASE("trajectory_stride") {
  CHECK(trajectory_stride(1) == 1);
  CHECK(trajectory_stride(999) == 1);
  CHECK(trajectory_stride(200000) == 200);
}

TEST_CASE("configuration errors") {
  auto cfg = fixture::cell(Method::Bspsa, 2, 100, 2);
  cfg.n_iterations = 0;
  CHECK_THROWS(cfg.validate());
  cfg = fixture::cell(Method::Bspsa, 2, 100, 2);
  cfg.landscape.curvatures(1) = 0.0;
  CHECK_THROWS(cfg.validate());
  cfg = fixture::cell(Method::Bspsa, 2, 100, 2);
  cfg.landscape = QuadraticLandscape::uniform(3, 0.01, 0.82);
  CHECK_THROWS(cfg.validate());
  cfg = fixture::cell(Method::Bspsa, 2, 100, 2);
  cfg.repeats = 0;
  CHECK_THROWS(run_experiment(cfg));
}

TEST_CASE("run_single bookkeeping") {
  auto cfg = fixture::cell(Method::Bspsas, 3, 2500, 1);
  cfg.record_outcomes = true;
  const RunResult r = run_single(cfg, 42);
  CHECK(r.seed == 42);
  CHECK(r.initial_loss == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.elo_gain == r.initial_loss - r.final_loss);
  CHECK(r.outcomes.size() == 2500);
  REQUIRE(r.trajectory.size() == 1 + 2500 / 2);
  CHECK(r.trajectory.front().k == 0);
  CHECK(r.trajectory.back().k == 2500);
  CHECK(r.trajectory.back().elo_loss == r.final_loss);
}

TEST_CASE("experiments are reproducible and independent of thread count") {
  for (Method m : {Method::Spsa, Method::Bspsas, Method::Bspsa}) {
    auto cfg = fixture::cell(m, 4, 3000, 6, 77);
    cfg.parallelism = 1;
    const ExperimentReport a = run_experiment(cfg);
    cfg.parallelism = 3;
    const ExperimentReport b = run_experiment(cfg);
    REQUIRE(a.runs.size() == b.runs.size());
    for (std::size_t i = 0; i < a.runs.size(); ++i) {
      CHECK(a.runs[i].final_theta == b.runs[i].final_theta);
      CHECK(a.runs[i].seed == run_seed(77, i));
    }
    CHECK(a.mean == b.mean);
    CHECK(a.stddev == b.stddev);
    CHECK(a.min <= a.mean);
    CHECK(a.mean <= a.max);
    CHECK(a.warnings.empty());
  }
}

TEST_CASE("a single repeat warns and reports zero spread") {
  const ExperimentReport r = run_experiment(fixture::cell(Method::Bspsa, 1, 500, 1));
  CHECK(r.stddev == 0.0);
  CHECK(r.mean == r.runs[0].elo_gain);
  REQUIRE(r.warnings.size() == 1);
}

TEST_CASE("different master seeds give different runs") {
  const auto a = run_experiment(fixture::cell(Method::Bspsa, 2, 500, 3, 1));
  const auto b = run_experiment(fixture::cell(Method::Bspsa, 2, 500, 3, 2));
  CHECK(a.runs[0].final_theta != b.runs[0].final_theta);
}

TEST_CASE("run seeds are distinct within an experiment") {
  for (std::uint64_t master : {0ULL, 1ULL, 0xffffffffffffffffULL}) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(run_seed(master, i));
    CHECK(seen.size() == 10000);
  }
}

TEST_CASE("streams are separate and the tuner stream is the run seed") {
  RunStreams s(5);
  CHECK(s.tuner == Rng(5));
  CHECK_FALSE(s.offsets == s.games);
  CHECK_FALSE(s.offsets == s.tuner);
}

TEST_CASE("rng state round-trips") {
  Rng a(9);
  for (int i = 0; i < 100; ++i) a.next();
  Rng b = Rng::deserialize(a.serialize());
  CHECK(a == b);
  CHECK(a.next() == b.next());
  CHECK_THROWS(Rng::deserialize("not a state"));
}

TEST_CASE("summarize") {
  const auto s = summarize({1.0, 2.0, 3.0, 4.0});
  CHECK(s.mean == 2.5);
  CHECK(s.stddev == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-15));
  CHECK(s.min == 1.0);
  CHECK(s.max == 4.0);
  const auto same = summarize(std::vector<double>(7, 0.1));
  CHECK(same.mean == 0.1);
}

TEST_CASE("tuning improves a short one-parameter run on average") {
  const auto r = run_experiment(fixture::cell(Method::Bspsa, 1, 20000, 4, 3));
  CHECK(r.mean > 1.9);
}
