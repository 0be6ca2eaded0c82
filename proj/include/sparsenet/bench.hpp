#pragma once

// Runtime comparison of the closed-form sparse cross-correlation against the
// generic coordinate-descent lasso baseline on identical synthetic inputs.
// A report is only valid when both methods agree; speed without matching
// solutions is an error.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sparsenet/types.hpp"

namespace sparsenet {

inline constexpr double kBenchAgreementTol = 1e-5;

struct BenchCell {
  Index n = 0;
  Index p = 0;
  double t_soft = 0;   // seconds, full lambda sweep
  double t_lasso = 0;  // seconds, full lambda sweep
  double ratio = 0;    // t_lasso / t_soft
  double agreement = 0;  // max-norm difference across the sweep
};

struct BenchReport {
  std::string fast_method = "soft-threshold";
  std::string baseline_method = "coordinate-descent-lasso";
  Index grid_count = 0;
  std::uint64_t seed = 0;
  std::vector<BenchCell> cells;
};

// Throws AgreementError when any cell disagrees beyond kBenchAgreementTol.
BenchReport bench_sparse_cross(const std::vector<Index>& n_list,
                               const std::vector<Index>& p_list, Index grid_count,
                               std::uint64_t seed);

// Rows: n,p,t_soft,t_lasso,ratio.
void write_bench_csv(std::ostream& out, const BenchReport& report);
void write_bench_csv_file(const std::string& path, const BenchReport& report);

}  // namespace sparsenet
