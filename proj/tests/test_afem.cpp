#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tvfem/afem.hpp"

using namespace tvfem;

TEST_CASE("doerfler_mark: greedy arithmetic and theta = 1")
{
  CHECK(doerfler_mark({4, 3, 2, 1}, 0.5) == std::vector<int>{0});
  // theta = 1 marks everything with a positive indicator
  const std::vector<int> all = doerfler_mark({4, 0, 2, 1}, 1.0);
  CHECK(all == std::vector<int>{0, 2, 3});
  CHECK(doerfler_mark({0, 0}, 0.7).empty());
  CHECK_THROWS_AS(doerfler_mark({1, -0.5}, 0.5), Error);
  CHECK_THROWS_AS(doerfler_mark({1.0, 1.0}, 0.0), Error);
}

TEST_CASE("doerfler_mark is minimal against exhaustive search")
{
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> val(0.0, 1.0);
  std::uniform_int_distribution<int> len(1, 12);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = len(rng);
    std::vector<double> ind(n);
    double total = 0.0;
    for (double& v : ind) {
      v = val(rng);
      total += v;
    }
    const double theta = 0.3 + 0.6 * val(rng);
    const std::vector<int> marked = doerfler_mark(ind, theta);
    double got = 0.0;
    for (int e : marked) got += ind[e];
    CHECK(got >= theta * theta * total - 1e-12);

    // exhaustive minimal cardinality
    int best = n + 1;
    for (int mask = 0; mask < (1 << n); ++mask) {
      double s = 0.0;
      int card = 0;
      for (int k = 0; k < n; ++k)
        if (mask & (1 << k)) {
          s += ind[k];
          ++card;
        }
      if (s >= theta * theta * total) best = std::min(best, card);
    }
    CHECK(static_cast<int>(marked.size()) == best);
  }
}

TEST_CASE("update_epsilon: global and local formulas")
{
  // mesh engineered so the average meshsize is exactly 0.1: grid of squares
  // with side 0.1/sqrt(2) halved into triangles of diameter 0.1
  const double side = 0.1 / std::sqrt(2.0);
  const Triangulation m = uniform_triangulation(2, {vec(0, 0), vec(10 * side, 10 * side)}, 10);
  CHECK(mesh_stats(m).avg_meshsize == doctest::Approx(0.1));
  std::vector<int> parent(m.n_elements(), 0);

  // single-element "previous mesh" data
  Triangulation prev = uniform_triangulation(2, {vec(0, 0), vec(1, 1)}, 1);
  P0Function pu(prev, 0.0);

  const P0Function global =
      update_epsilon(EpsStrategy::global, m, parent, P0Function(prev, 0.0), P0Function(m, 0.0), 10.0);
  for (double e : global.values) CHECK(e == doctest::Approx(0.01));

  // local with Pi u = g everywhere: eps = h^3
  const P0Function local0 = update_epsilon(EpsStrategy::local, m, parent, P0Function(prev, 0.7),
                                           P0Function(m, 0.7), 10.0);
  for (double e : local0.values) CHECK(e == doctest::Approx(1e-3));

  // local with |Pi u - g| = 0.4, alpha = 10, d = 2, h = 0.1: 0.021
  const P0Function local = update_epsilon(EpsStrategy::local, m, parent, P0Function(prev, 0.4),
                                          P0Function(m, 0.0), 10.0);
  for (double e : local.values) CHECK(e == doctest::Approx(0.021));
}

TEST_CASE("afem_run: zero data stops at level 0 with zero estimator")
{
  BenchmarkCase bc;
  bc.name = "zero";
  bc.dim = 2;
  bc.domain = {vec(0, 0), vec(1, 1)};
  bc.subdivisions = 2;
  bc.alpha = 10.0;
  bc.dirichlet = true;
  bc.g = [](const Vec&) { return 0.0; };

  AfemConfig cfg;
  cfg.max_levels = 5;
  const std::vector<AfemLevel> levels = afem_run(bc, cfg);
  CHECK(levels.size() == 1);
  CHECK(levels[0].eta_sq == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("afem_run on the one-disk benchmark: admissibility and growth")
{
  const BenchmarkCase bc = benchmark("one_disk_2d");
  AfemConfig cfg;
  cfg.max_levels = 6;
  cfg.eps_strategy = EpsStrategy::global;
  const std::vector<AfemLevel> levels = afem_run(bc, cfg);
  REQUIRE(levels.size() == 6);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const AfemLevel& lv = levels[i];
    CHECK(lv.linf_zbar <= 1.0 + 1e-12);
    CHECK(lv.pi_z_margin <= 0.0);
    CHECK(lv.eta_sq >= 0.0);
    CHECK(lv.rho_tilde_sq >= 0.0);
    CHECK(lv.rho_tilde_sq <= lv.eta_sq + 1e-9);  // reliability
    CHECK(is_conforming(*lv.mesh));
    if (i > 0) CHECK(lv.n_vertices > levels[i - 1].n_vertices);
    // every eps stays inside (0,1)
    // (rebuild the field the level used: h^2 clamped)
    CHECK(lv.h * lv.h < 1.0);
  }
  // the estimator decreases over the run
  CHECK(levels.back().eta_sq < levels.front().eta_sq);
}

TEST_CASE("afem_run with theta = 1 refines every element with positive indicator")
{
  const BenchmarkCase bc = benchmark("one_disk_2d");
  AfemConfig cfg;
  cfg.max_levels = 3;
  cfg.theta = 1.0;
  const std::vector<AfemLevel> levels = afem_run(bc, cfg);
  REQUIRE(levels.size() == 3);
  // pure red refinement: element count multiplies by four
  CHECK(levels[1].mesh->n_elements() == 4 * levels[0].mesh->n_elements());
  CHECK(levels[2].mesh->n_elements() == 16 * levels[0].mesh->n_elements());
}

TEST_CASE("afem_run local epsilon strategy keeps eps within bounds")
{
  const BenchmarkCase bc = benchmark("one_disk_2d");
  AfemConfig cfg;
  cfg.max_levels = 4;
  cfg.eps_strategy = EpsStrategy::local;
  const std::vector<AfemLevel> levels = afem_run(bc, cfg);
  CHECK(levels.size() == 4);
  for (const AfemLevel& lv : levels) {
    CHECK(lv.eta_sq > 0.0);
    CHECK(lv.linf_zbar <= 1.0 + 1e-12);
  }
}

TEST_CASE("marked set property holds for the estimator indicators")
{
  const BenchmarkCase bc = benchmark("one_disk_2d");
  const auto mesh = std::make_shared<Triangulation>(bc.initial_mesh());
  RofProblem p;
  p.mesh = mesh.get();
  p.alpha = bc.alpha;
  p.g_exact = bc.g;
  p.g_h = p0_project(*mesh, bc.g, 3);
  p.eps_field = P0Function(*mesh, 0.01);
  p.dirichlet = true;
  const FlowResult res = solve_rof(p, FlowConfig{});
  const DualReport rep = build_dual_report(p, res.u);
  const EstimatorReport est = eta_cr(p, boundary_interpolant(res.u), rep.z_admissible);
  const double theta = 0.5;
  const std::vector<int> marked = doerfler_mark(est.eta_sq_local, theta);
  double sum = 0.0;
  for (int e : marked) sum += est.eta_sq_local[e];
  CHECK(sum >= theta * theta * est.eta_sq_global - 1e-12);
  CHECK(marked.size() < est.eta_sq_local.size());
}
