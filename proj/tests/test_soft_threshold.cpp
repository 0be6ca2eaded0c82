#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "sparsenet/correlation.hpp"
#include "sparsenet/soft_threshold.hpp"
#include "sparsenet/synthetic.hpp"

using namespace sparsenet;

TEST_SUITE_BEGIN("sparse-threshold");

TEST_CASE("soft_threshold_scalar branch values") {
  CHECK(soft_threshold_scalar(0.9, 0.5) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(soft_threshold_scalar(0.3, 0.3) == 0.0);  // ties at |r| = lambda map to 0
  CHECK(soft_threshold_scalar(-0.7, 0.2) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(soft_threshold_scalar(0.0, 0.0) == 0.0);
  CHECK(soft_threshold_scalar(0.25, 0.0) == 0.25);
}

TEST_CASE("soft_threshold_scalar is odd and 1-Lipschitz") {
  for (double r = -1.0; r <= 1.0; r += 0.05) {
    CHECK(soft_threshold_scalar(-r, 0.3) == -soft_threshold_scalar(r, 0.3));
    const double step = soft_threshold_scalar(r + 1e-6, 0.3) - soft_threshold_scalar(r, 0.3);
    CHECK(std::abs(step) <= 1e-6 + 1e-15);
  }
}

TEST_CASE("soft_threshold_scalar rejects bad input") {
  CHECK_THROWS_AS(soft_threshold_scalar(std::numeric_limits<double>::quiet_NaN(), 0.1),
                  NonFiniteError);
  CHECK_THROWS_AS(soft_threshold_scalar(0.5, -0.1), ValidationError);
}

TEST_CASE("sparse_correlation at lambda 0 returns the sample correlation") {
  const SymmetricMatrix corr = sample_correlation(normalize(synth_data(6, 5, {}, 4)).data);
  const SparseEstimate est = sparse_correlation(corr, 0.0);
  CHECK((est.to_dense() - corr.entries).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sparse_correlation above the max off-diagonal empties the estimate") {
  const SymmetricMatrix corr = sample_correlation(normalize(synth_data(6, 5, {}, 4)).data);
  const SparseEstimate est = sparse_correlation(corr, max_offdiagonal(corr));
  CHECK(est.nnz == 0);
  CHECK(est.to_dense().isApprox(Matd::Identity(5, 5)));  // diagonal pinned at 1
}

TEST_CASE("sparse_correlation solves each per-pair problem (golden-section oracle)") {
  const SymmetricMatrix corr = sample_correlation(normalize(synth_data(5, 4, {}, 12)).data);
  const double lambda = 0.15;
  const SparseEstimate est = sparse_correlation(corr, lambda);
  for (Index j = 0; j < 4; ++j)
    for (Index i = 0; i < j; ++i) {
      const double r = corr.entries(i, j);
      auto objective = [&](double g) { return (g - r) * (g - r) + 2.0 * lambda * std::abs(g); };
      const double expected = oracles::golden_section_min(objective, -2.0, 2.0);
      CHECK(est.dense(i, j) == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("per-pair objective is minimized against +- 1e-4 perturbations") {
  const SymmetricMatrix corr = sample_correlation(normalize(synth_data(4, 6, {}, 8)).data);
  for (double lambda : {0.05, 0.2, 0.6}) {
    const SparseEstimate est = sparse_correlation(corr, lambda);
    for (Index j = 0; j < 6; ++j)
      for (Index i = 0; i < j; ++i) {
        const double r = corr.entries(i, j);
        auto f = [&](double g) { return (g - r) * (g - r) + 2.0 * lambda * std::abs(g) + 1.0; };
        const double g_hat = est.dense(i, j);
        CHECK(f(g_hat) <= f(g_hat + 1e-4) + 1e-15);
        CHECK(f(g_hat) <= f(g_hat - 1e-4) + 1e-15);
      }
  }
}

TEST_CASE("shrinkage is monotone and supports are nested across lambda") {
  const SymmetricMatrix corr = sample_correlation(normalize(synth_data(5, 8, {}, 23)).data);
  const SparseEstimate first = sparse_correlation(corr, 0.1);
  const SparseEstimate second = sparse_correlation(corr, 0.35);
  Index nonzero_bound_violations = 0;
  for (Index j = 0; j < 8; ++j)
    for (Index i = 0; i < j; ++i) {
      CHECK(std::abs(second.dense(i, j)) <= std::abs(first.dense(i, j)) + 1e-15);
      if (second.dense(i, j) != 0.0 && first.dense(i, j) == 0.0) ++nonzero_bound_violations;
      // Sign preservation against the input correlation.
      if (first.dense(i, j) != 0.0)
        CHECK(first.dense(i, j) * corr.entries(i, j) > 0.0);
      // Shrinkage bound |e| <= 1 - lambda for surviving entries.
      if (first.dense(i, j) != 0.0)
        CHECK(std::abs(first.dense(i, j)) <= 1.0 - 0.1 + 1e-12);
      if (second.dense(i, j) != 0.0)
        CHECK(std::abs(second.dense(i, j)) <= 1.0 - 0.35 + 1e-12);
    }
  CHECK(nonzero_bound_violations == 0);
}

TEST_CASE("nnz counts exactly the stored nonzeros") {
  const SymmetricMatrix corr = sample_correlation(normalize(synth_data(4, 7, {}, 31)).data);
  for (double lambda : {0.0, 0.2, 0.5, 0.9}) {
    const SparseEstimate est = sparse_correlation(corr, lambda);
    Index count = 0;
    est.for_each_nonzero([&](Index, Index, double v) {
      CHECK(v != 0.0);
      ++count;
    });
    CHECK(count == est.nnz);
  }
}

TEST_CASE("triplet storage kicks in above the dense limit and matches the dense path") {
  const SymmetricMatrix corr = sample_correlation(normalize(synth_data(5, 12, {}, 40)).data);
  const SparseEstimate dense = sparse_correlation(corr, 0.25);
  const SparseEstimate triplet = sparse_correlation(corr, 0.25, /*dense_limit=*/4);
  CHECK(dense.dense_storage);
  CHECK_FALSE(triplet.dense_storage);
  CHECK(dense.nnz == triplet.nnz);
  CHECK((dense.to_dense() - triplet.to_dense()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("repeated evaluation is bitwise deterministic") {
  const SymmetricMatrix corr = sample_correlation(normalize(synth_data(6, 9, {}, 55)).data);
  const Matd a = sparse_correlation(corr, 0.17).to_dense();
  const Matd b = sparse_correlation(corr, 0.17).to_dense();
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sparse_cross_correlation thresholds the documented sample row") {
  // Row (0.4, 0.5, -0.7) at lambda 0.45 -> (0, 0.05, -0.25).
  Matd cross = Matd::Zero(4, 4);
  cross(0, 1) = 0.4;
  cross(0, 2) = 0.5;
  cross(0, 3) = -0.7;
  cross(1, 2) = 0.3;
  cross(1, 3) = -0.1;
  cross(2, 3) = 0.9;
  const SparseEstimate est = sparse_cross_correlation(
      make_symmetric(std::move(cross), MatrixKind::cross_correlation), 0.45);
  CHECK(est.dense(0, 1) == 0.0);
  CHECK(est.dense(0, 2) == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(est.dense(0, 3) == doctest::Approx(-0.25).epsilon(1e-14));
  CHECK(est.dense(2, 3) == doctest::Approx(0.45).epsilon(1e-14));
}

TEST_CASE("sparse_cross_correlation at lambda 0 is the identity map") {
  const DataMatrix x = normalize(synth_data(5, 4, {}, 60)).data;
  const DataMatrix y = normalize(synth_data(5, 4, {}, 61)).data;
  const SymmetricMatrix cross = sample_cross_correlation(x, y);
  CHECK((sparse_cross_correlation(cross, 0.0).to_dense() - cross.entries)
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("sparse_cross_correlation thresholds the diagonal too") {
  const DataMatrix x = normalize(synth_data(5, 3, {}, 62)).data;
  const SymmetricMatrix cross = sample_cross_correlation(x, x);
  const SparseEstimate est = sparse_cross_correlation(cross, 0.999);
  for (Index i = 0; i < 3; ++i) CHECK(est.dense(i, i) == doctest::Approx(1.0 - 0.999));
}

TEST_CASE("sparse_cross_correlation matches the proximal-gradient lasso oracle") {
  const DataMatrix x = normalize(synth_data(6, 5, {}, 72)).data;
  const DataMatrix y = normalize(synth_data(6, 5, {}, 73)).data;
  const SymmetricMatrix cross = sample_cross_correlation(x, y);
  const LambdaGrid grid = lambda_grid_from_data(cross, 10);
  for (double lambda : grid.values) {
    const SparseEstimate est = sparse_cross_correlation(cross, lambda);
    for (Index i = 0; i < 5; ++i)
      for (Index j = 0; j < 5; ++j) {
        // Pair (i, j) is its own lasso: target y(v_j), single column x(v_i).
        Matd design(6, 1);
        design.col(0) = x.values.col(i);
        const Vecd beta =
            oracles::prox_gradient_lasso(design, y.values.col(j), lambda);
        CHECK(est.dense(i, j) == doctest::Approx(beta[0]).epsilon(1e-6));
      }
  }
}

TEST_CASE("lambda_grid_from_data spans [0, max] uniformly") {
  Matd m = Matd::Identity(3, 3);
  m(0, 1) = m(1, 0) = 0.8;
  m(0, 2) = m(2, 0) = 0.5;
  m(1, 2) = m(2, 1) = -0.3;
  const SymmetricMatrix corr = make_symmetric(std::move(m), MatrixKind::correlation);
  const LambdaGrid grid = lambda_grid_from_data(corr, 5);
  REQUIRE(grid.size() == 5);
  const double expected[] = {0.0, 0.2, 0.4, 0.6, 0.8};
  for (size_t t = 0; t < 5; ++t)
    CHECK(grid.values[t] == doctest::Approx(expected[t]).epsilon(1e-15));
  CHECK(grid.origin == GridOrigin::data_driven);

  const LambdaGrid two = lambda_grid_from_data(corr, 2);
  CHECK(two.values == std::vector<double>{0.0, 0.8});
}

TEST_CASE("lambda_grid_from_data degenerates on an all-zero off-diagonal") {
  const SymmetricMatrix diag = make_symmetric(Matd::Identity(4, 4), MatrixKind::correlation);
  const LambdaGrid grid = lambda_grid_from_data(diag, 6);
  CHECK(grid.degenerate);
  CHECK(grid.values == std::vector<double>{0.0});
}

TEST_CASE("lambda_grid_from_data rejects degenerate shapes") {
  const SymmetricMatrix tiny = make_symmetric(Matd::Identity(1, 1), MatrixKind::covariance);
  CHECK_THROWS_AS(lambda_grid_from_data(tiny, 5), EmptyMatrixError);
  const SymmetricMatrix ok = make_symmetric(Matd::Identity(3, 3), MatrixKind::covariance);
  CHECK_THROWS_AS(lambda_grid_from_data(ok, 1), ValidationError);
}

TEST_CASE("uniform_lambda_grid covers [0, max] with exact endpoints") {
  const LambdaGrid grid = uniform_lambda_grid(5, 0.9);
  CHECK(grid.values.front() == 0.0);
  CHECK(grid.values.back() == 0.9);
  CHECK(grid.size() == 5);
  CHECK(grid.origin == GridOrigin::uniform);
  CHECK_THROWS_AS(uniform_lambda_grid(1, 0.9), ValidationError);
  CHECK_THROWS_AS(uniform_lambda_grid(5, 0.0), ValidationError);
}

TEST_CASE("make_lambda_grid enforces strict monotonicity") {
  CHECK_THROWS_AS(make_lambda_grid({0.1, 0.1, 0.2}), ValidationError);
  CHECK_THROWS_AS(make_lambda_grid({-0.1, 0.2}), ValidationError);
  CHECK_THROWS_AS(make_lambda_grid({}), ValidationError);
  CHECK(make_lambda_grid({0.0, 0.5, 1.0}).size() == 3);
}

TEST_SUITE_END();
