#pragma once

// Seeded synthetic data matrices for tests, demos and benchmarks.
// Gaussians come from a Box-Muller transform over the raw mt19937_64
// stream, so a seed pins the output bit for bit.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>

#include "sparsenet/data_matrix.hpp"
#include "sparsenet/errors.hpp"
#include "sparsenet/types.hpp"

namespace sparsenet {

class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  double uniform01() {
    // (0, 1]: keeps log() finite.
    return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
  }

  std::mt19937_64 rng_;
  double spare_ = 0;
  bool have_spare_ = false;
};

enum class SynthStructure { iid_normal, planted_blocks, chain_precision };

struct SynthSpec {
  SynthStructure structure = SynthStructure::iid_normal;
  Index blocks = 2;          // planted_blocks: number of equal-ish blocks
  double within = 0.7;       // planted_blocks: same-block correlation
  double between = 0.0;      // planted_blocks: cross-block correlation
  double chain_coupling = 0.45;  // chain_precision: off-diagonal of the precision
};

namespace detail {

inline Matd covariance_square_root(const Matd& sigma) {
  Eigen::SelfAdjointEigenSolver<Matd> eig(sigma);
  const Vecd& values = eig.eigenvalues();
  if (values.minCoeff() <= 1e-12 * std::max(1.0, values.maxCoeff()))
    throw InvalidStructureError("implied covariance is not positive definite");
  return eig.eigenvectors() * values.cwiseSqrt().asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace detail

// Covariance with unit diagonal, `within` inside equal-ish contiguous blocks
// and `between` across them.
inline Matd planted_block_covariance(Index p, Index blocks, double within, double between) {
  if (blocks < 1 || blocks > p) throw InvalidStructureError("block count must be in [1, p]");
  std::vector<Index> block_of(static_cast<size_t>(p));
  const Index base = p / blocks, extra = p % blocks;
  Index v = 0;
  for (Index b = 0; b < blocks; ++b) {
    const Index size = base + (b < extra ? 1 : 0);
    for (Index k = 0; k < size; ++k) block_of[static_cast<size_t>(v++)] = b;
  }
  Matd sigma(p, p);
  for (Index j = 0; j < p; ++j)
    for (Index i = 0; i < p; ++i)
      sigma(i, j) = i == j ? 1.0
                           : (block_of[static_cast<size_t>(i)] == block_of[static_cast<size_t>(j)]
                                  ? within
                                  : between);
  return sigma;
}

// Tridiagonal precision with unit diagonal and `coupling` off the diagonal.
inline Matd chain_precision_matrix(Index p, double coupling) {
  Matd prec = Matd::Identity(p, p);
  for (Index j = 0; j + 1 < p; ++j) {
    prec(j, j + 1) = coupling;
    prec(j + 1, j) = coupling;
  }
  return prec;
}

inline DataMatrix synth_data(Index n, Index p, const SynthSpec& spec, std::uint64_t seed) {
  if (n < 2 || p < 2) throw ValidationError("synth_data needs n >= 2 and p >= 2");
  GaussianSampler gauss(seed);
  Matd z(n, p);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j) z(i, j) = gauss();

  switch (spec.structure) {
    case SynthStructure::iid_normal:
      return make_data_matrix(std::move(z));
    case SynthStructure::planted_blocks: {
      const Matd root =
          detail::covariance_square_root(planted_block_covariance(p, spec.blocks, spec.within,
                                                                  spec.between));
      return make_data_matrix(Matd(z * root));
    }
    case SynthStructure::chain_precision: {
      Eigen::LLT<Matd> llt(chain_precision_matrix(p, spec.chain_coupling));
      if (llt.info() != Eigen::Success)
        throw InvalidStructureError("chain precision is not positive definite");
      Matd sigma = llt.solve(Matd::Identity(p, p));
      sigma = ((sigma + sigma.transpose()) / 2.0).eval();
      return make_data_matrix(Matd(z * detail::covariance_square_root(sigma)));
    }
  }
  throw InvalidStructureError("unknown synthetic structure");
}

}  // namespace sparsenet
