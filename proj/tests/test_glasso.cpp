#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "oracles.hpp"
#include "sparsenet/correlation.hpp"
#include "sparsenet/glasso.hpp"
#include "sparsenet/glasso_filtration.hpp"
#include "sparsenet/synthetic.hpp"

using namespace sparsenet;

namespace {

SymmetricMatrix correlation_of(Index n, Index p, std::uint64_t seed) {
  return sample_correlation(normalize(synth_data(n, p, {}, seed)).data);
}

SymmetricMatrix two_block_matrix() {
  // Blocks {0,1,2,3} at 0.6 and {4,5,6} at 0.5; cross-block 0.05.
  Matd s = planted_block_covariance(7, 2, 0.0, 0.05);
  for (Index j = 0; j < 4; ++j)
    for (Index i = 0; i < j; ++i) s(i, j) = s(j, i) = 0.6;
  for (Index j = 4; j < 7; ++j)
    for (Index i = 4; i < j; ++i) s(i, j) = s(j, i) = 0.5;
  return make_symmetric(std::move(s), MatrixKind::covariance);
}

void check_solution_contract(const GlassoSolution& sol, const SymmetricMatrix& s) {
  Eigen::SelfAdjointEigenSolver<Matd> eig(sol.precision.entries);
  CHECK(eig.eigenvalues().minCoeff() > 1e-10);
  const Matd product = sol.precision.entries * sol.covariance.entries;
  CHECK((product - Matd::Identity(s.dim(), s.dim())).cwiseAbs().maxCoeff() < 1e-6);
  const double recomputed = penalized_loglik(sol.precision, s, sol.lambda);
  CHECK(std::abs(recomputed - sol.objective) < 1e-8);
  for (size_t t = 1; t < sol.objective_trace.size(); ++t)
    CHECK(sol.objective_trace[t] >=
          sol.objective_trace[t - 1] - 1e-9 * (1.0 + std::abs(sol.objective_trace[t - 1])));
}

}  // namespace

TEST_SUITE_BEGIN("glasso");

TEST_CASE("penalized_loglik closed cases") {
  const SymmetricMatrix eye3 = make_symmetric(Matd::Identity(3, 3), MatrixKind::covariance);
  CHECK(penalized_loglik(eye3, eye3, 0.0) == doctest::Approx(-3.0));
  CHECK(penalized_loglik(eye3, eye3, 1.0) == doctest::Approx(-6.0));
}

TEST_CASE("penalized_loglik matches the eigendecomposition oracle") {
  const Matd a = synth_data(10, 4, {}, 5).values;
  Matd spd = a.transpose() * a / 10.0 + 0.5 * Matd::Identity(4, 4);
  const Matd s = correlation_of(9, 4, 6).entries;
  const double lambda = 0.37;
  const double got = penalized_loglik(make_symmetric(Matd(spd), MatrixKind::precision),
                                      make_symmetric(Matd(s), MatrixKind::covariance), lambda);
  CHECK(got == doctest::Approx(oracles::loglik_eigen(spd, s, lambda)).epsilon(1e-10));
}

TEST_CASE("penalized_loglik rejects indefinite precision") {
  Matd indefinite = Matd::Identity(3, 3);
  indefinite(2, 2) = -1.0;
  CHECK_THROWS_AS(penalized_loglik(make_symmetric(std::move(indefinite), MatrixKind::precision),
                                   make_symmetric(Matd::Identity(3, 3), MatrixKind::covariance),
                                   0.1),
                  NotPositiveDefiniteError);
}

TEST_CASE("identity input decouples: precision = I/(1+lambda)") {
  const SymmetricMatrix eye = make_symmetric(Matd::Identity(6, 6), MatrixKind::covariance);
  for (double lambda : {0.1, 0.5, 2.0}) {
    const GlassoSolution sol = glasso_fit(eye, lambda);
    CHECK(sol.converged);
    CHECK((sol.precision.entries - Matd::Identity(6, 6) / (1.0 + lambda))
              .cwiseAbs()
              .maxCoeff() < 1e-14);
    CHECK((sol.covariance.entries - (1.0 + lambda) * Matd::Identity(6, 6))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
}

TEST_CASE("p = 2 with |s12| <= lambda decouples exactly") {
  Matd s(2, 2);
  s << 1.0, 0.3, 0.3, 1.0;
  const GlassoSolution sol =
      glasso_fit(make_symmetric(std::move(s), MatrixKind::covariance), 0.3);
  CHECK(sol.precision.entries(0, 1) == 0.0);
  CHECK(sol.precision.entries(0, 0) == doctest::Approx(1.0 / 1.3).epsilon(1e-12));
}

TEST_CASE("objective matches a long-running proximal-gradient reference") {
  const SymmetricMatrix s = correlation_of(8, 5, 77);
  const double lambda = 0.2;
  const GlassoSolution sol = glasso_fit(s, lambda, {.tol = 1e-8});
  const Matd reference = oracles::prox_gradient_glasso(s.entries, lambda);
  const double ref_obj = oracles::loglik_eigen(reference, s.entries, lambda);
  CHECK(std::abs(sol.objective - ref_obj) < 1e-5);
  CHECK(sol.objective >= ref_obj - 1e-9);  // ours maximizes; must not be below
  check_solution_contract(sol, s);
}

TEST_CASE("kkt residual is tight at convergence, including singular S") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const SymmetricMatrix s = correlation_of(5, 9, 200 + seed);  // n < p: singular
    const GlassoSolution sol = glasso_fit(s, 0.25);
    CHECK(sol.converged);
    CHECK(sol.kkt_residual <= 1e-4);
    check_solution_contract(sol, s);
  }
}

TEST_CASE("unpenalized diagonal pins W_ii to S_ii") {
  const SymmetricMatrix s = correlation_of(10, 4, 13);
  GlassoOptions opts;
  opts.penalize_diagonal = false;
  opts.tol = 1e-10;
  const GlassoSolution sol = glasso_fit(s, 0.15, opts);
  CHECK(sol.converged);
  CHECK((sol.covariance.entries.diagonal() - s.entries.diagonal()).cwiseAbs().maxCoeff() <
        1e-8);
  const Matd reference =
      oracles::prox_gradient_glasso(s.entries, 0.15, /*penalize_diagonal=*/false);
  CHECK(std::abs(sol.objective -
                 oracles::loglik_eigen(reference, s.entries, 0.15, false)) < 1e-5);
}

TEST_CASE("sweep budget exhaustion returns best iterate with converged = false") {
  const SymmetricMatrix s = correlation_of(6, 8, 90);
  GlassoOptions opts;
  opts.tol = 1e-14;
  opts.max_sweeps = 1;
  const GlassoSolution sol = glasso_fit(s, 0.05, opts);
  CHECK_FALSE(sol.converged);
  CHECK(sol.iterations == 1);
  CHECK(sol.objective_trace.size() == 1);
  CHECK(sol.precision.entries.allFinite());
}

TEST_CASE("lambda = 0 inverts a positive definite S and rejects a singular one") {
  const SymmetricMatrix pd = correlation_of(30, 4, 41);
  const GlassoSolution sol = glasso_fit(pd, 0.0);
  CHECK((sol.precision.entries * pd.entries - Matd::Identity(4, 4)).cwiseAbs().maxCoeff() <
        1e-10);
  const SymmetricMatrix singular = correlation_of(4, 8, 42);
  CHECK_THROWS_AS(glasso_fit(singular, 0.0), NotPositiveDefiniteError);
}

TEST_CASE("input validation") {
  Matd neg = Matd::Identity(3, 3);
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(glasso_fit(make_symmetric(std::move(neg), MatrixKind::covariance), 0.1),
                  ValidationError);
  const DataMatrix x = normalize(synth_data(5, 3, {}, 1)).data;
  const SymmetricMatrix cross = sample_cross_correlation(x, x);
  CHECK_THROWS_AS(glasso_fit(cross, 0.1), ValidationError);
}

TEST_CASE("screen_partition boundary cases") {
  const SymmetricMatrix s = two_block_matrix();
  const ScreeningPartition all_apart = screen_partition(s, max_offdiagonal(s));
  CHECK(all_apart.kappa == 7);
  const ScreeningPartition together = screen_partition(s, 0.0);
  CHECK(together.kappa == 1);
}

TEST_CASE("screen_partition recovers the planted blocks and matches BFS") {
  const SymmetricMatrix s = two_block_matrix();
  const ScreeningPartition part = screen_partition(s, 0.1);
  CHECK(part.kappa == 2);
  CHECK(part.components[0] == std::vector<Index>{0, 1, 2, 3});
  CHECK(part.components[1] == std::vector<Index>{4, 5, 6});

  std::vector<std::pair<Index, Index>> edges;
  for (Index j = 0; j < 7; ++j)
    for (Index i = 0; i < j; ++i)
      if (std::abs(s.entries(i, j)) > 0.1) edges.emplace_back(i, j);
  CHECK(part.labels == oracles::bfs_components(7, edges));
}

TEST_CASE("fully screened fit is the diagonal closed form") {
  Matd s = Matd::Identity(5, 5);
  s.diagonal() << 1.0, 2.0, 0.5, 3.0, 1.5;
  const GlassoSolution sol =
      glasso_fit_screened(make_symmetric(std::move(s), MatrixKind::covariance), 0.4);
  for (Index i = 0; i < 5; ++i) {
    CHECK(sol.precision.entries(i, i) ==
          doctest::Approx(1.0 / (sol.covariance.entries(i, i))).epsilon(1e-14));
    CHECK(sol.covariance.entries(i, i) ==
          doctest::Approx((i == 0   ? 1.0
                           : i == 1 ? 2.0
                           : i == 2 ? 0.5
                           : i == 3 ? 3.0
                                    : 1.5) +
                          0.4));
  }
  CHECK(sol.kkt_residual < 1e-12);
}

TEST_CASE("single screened block is bitwise identical to the plain fit") {
  const SymmetricMatrix s = correlation_of(20, 5, 50);
  const double lambda = 1e-4;  // below every |s_ij|: one block
  REQUIRE(screen_partition(s, lambda).kappa == 1);
  const GlassoSolution plain = glasso_fit(s, lambda);
  const GlassoSolution screened = glasso_fit_screened(s, lambda);
  CHECK((plain.precision.entries - screened.precision.entries).cwiseAbs().maxCoeff() == 0.0);
  CHECK(plain.iterations == screened.iterations);
}

TEST_CASE("screened and unscreened solutions agree on planted blocks") {
  const DataMatrix data =
      synth_data(20, 12, {SynthStructure::planted_blocks, 3, 0.7, 0.05}, 7);
  const SymmetricMatrix s = sample_correlation(normalize(data).data);
  const double lambda = 0.35;
  GlassoOptions opts;
  opts.tol = 1e-8;
  const GlassoSolution screened = glasso_fit_screened(s, lambda, opts);
  const GlassoSolution plain = glasso_fit(s, lambda, opts);
  CHECK((screened.precision.entries - plain.precision.entries).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(screened.kkt_residual <= 1e-4);
  check_solution_contract(screened, s);

  // Cross-block entries of the screened solution are exact zeros.
  const ScreeningPartition part = screen_partition(s, lambda);
  if (part.kappa > 1) {
    for (Index j = 0; j < 12; ++j)
      for (Index i = 0; i < j; ++i)
        if (part.labels[static_cast<size_t>(i)] != part.labels[static_cast<size_t>(j)])
          CHECK(screened.precision.entries(i, j) == 0.0);
  }
}

TEST_CASE("zero-pattern components equal the screening partition (several instances)") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SymmetricMatrix s = correlation_of(6, 8, 300 + seed);
    const LambdaGrid grid = lambda_grid_from_data(s, 6);
    for (size_t t = 1; t < grid.size(); ++t) {
      const GlassoSolution sol = glasso_fit_screened(s, grid.values[t]);
      const GraphPartition zero =
          connected_components(zero_pattern_adjacency(sol.precision, 1e-8));
      const ScreeningPartition screen = screen_partition(s, grid.values[t]);
      CHECK(zero.labels == screen.labels);
      CHECK(zero.kappa == screen.kappa);
    }
  }
}

TEST_CASE("glasso path warm starts match cold fits") {
  const SymmetricMatrix s = correlation_of(7, 6, 500);
  const LambdaGrid grid = make_lambda_grid({0.1, 0.3, 0.5, 0.7});
  const auto path = glasso_path(s, grid);
  REQUIRE(path.size() == 4);
  for (size_t t = 0; t < path.size(); ++t) {
    CHECK(path[t].converged);
    const GlassoSolution cold = glasso_fit(s, grid.values[t]);
    CHECK((path[t].precision.entries - cold.precision.entries).cwiseAbs().maxCoeff() < 1e-5);
    CHECK(path[t].lambda == grid.values[t]);
  }
}

TEST_CASE("zero-pattern sparsity is non-increasing in lambda") {
  const SymmetricMatrix s = correlation_of(8, 10, 510);
  LambdaGrid grid = lambda_grid_from_data(s, 12);
  grid.values.erase(grid.values.begin());
  const auto path = glasso_path(s, grid, {.tol = 1e-8});
  Index previous = std::numeric_limits<Index>::max();
  for (const GlassoSolution& sol : path) {
    Index nnz = 0;
    for (Index j = 0; j < 10; ++j)
      for (Index i = 0; i < j; ++i)
        if (std::abs(sol.precision.entries(i, j)) > 10.0 * 1e-8) ++nnz;
    CHECK(nnz <= previous);
    previous = nnz;
  }
}

TEST_CASE("glasso filtration: partitions match and node sets nest") {
  const DataMatrix data = synth_data(6, 9, {}, 660);
  const SymmetricMatrix s = sample_correlation(normalize(data).data);
  LambdaGrid grid = lambda_grid_from_data(s, 11);
  grid.values.erase(grid.values.begin());  // strictly positive for glasso
  const GlassoFiltrationResult result = glasso_filtration(data, grid);
  CHECK(result.skipped.empty());
  CHECK(result.all_equal);
  for (size_t t = 0; t < grid.size(); ++t) {
    CHECK(result.zero_pattern.partitions[t] == result.threshold.partitions[t]);
    CHECK(result.zero_pattern.beta0[t] == result.threshold.beta0[t]);
  }
  CHECK(verify_nestedness(result.zero_pattern).node_nested);
  CHECK(verify_nestedness(result.threshold).node_nested);
}

TEST_CASE("glasso filtration on a singleton grid above all correlations") {
  const DataMatrix data = synth_data(6, 5, {}, 661);
  const SymmetricMatrix s = sample_correlation(normalize(data).data);
  const double lambda = max_offdiagonal(s) + 0.01;
  const GlassoFiltrationResult result = glasso_filtration(data, make_lambda_grid({lambda}));
  CHECK(result.all_equal);
  CHECK(result.zero_pattern.beta0[0] == 5);
  CHECK(result.threshold.beta0[0] == 5);
}

TEST_CASE("glasso filtration skips failing grid points and reports them") {
  const DataMatrix data = synth_data(6, 7, {}, 662);
  const SymmetricMatrix s = sample_correlation(normalize(data).data);
  const double top = max_offdiagonal(s);
  GlassoOptions opts;
  opts.max_sweeps = 0;  // multi-node blocks cannot converge; singletons can
  const GlassoFiltrationResult result =
      glasso_filtration(data, make_lambda_grid({top / 4.0, top + 0.01}), opts);
  REQUIRE(result.skipped == std::vector<size_t>{0});
  CHECK(result.zero_pattern.partitions[0].labels.empty());  // sentinel
  CHECK(result.partitions_equal[1]);
  CHECK_FALSE(result.all_equal);
  CHECK_THROWS_AS(verify_nestedness(result.zero_pattern), ValidationError);
}

TEST_CASE("glasso filtration requires a positive grid") {
  const DataMatrix data = synth_data(5, 4, {}, 2);
  CHECK_THROWS_AS(glasso_filtration(data, make_lambda_grid({0.0, 0.5})), ValidationError);
}

TEST_CASE("parallel block solves are bitwise identical to sequential") {
  const DataMatrix data =
      synth_data(15, 14, {SynthStructure::planted_blocks, 4, 0.7, 0.02}, 7070);
  const SymmetricMatrix s = sample_correlation(normalize(data).data);
  GlassoOptions sequential;
  sequential.threads = 1;
  GlassoOptions parallel;
  parallel.threads = 4;
  const GlassoSolution a = glasso_fit_screened(s, 0.3, sequential);
  const GlassoSolution b = glasso_fit_screened(s, 0.3, parallel);
  CHECK((a.precision.entries - b.precision.entries).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.covariance.entries - b.covariance.entries).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.objective == b.objective);
}

TEST_SUITE_END();
