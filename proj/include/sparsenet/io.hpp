#pragma once

// CSV ingestion and export. CSV data files carry an optional header row of
// node names and one subject per row; parsing is locale-independent and
// ragged rows are rejected. Floats are written with 17 significant digits so
// files round-trip exactly.

#include <iosfwd>
#include <string>
#include <vector>

#include "sparsenet/data_matrix.hpp"
#include "sparsenet/filtration.hpp"
#include "sparsenet/soft_threshold.hpp"
#include "sparsenet/symmetric_matrix.hpp"
#include "sparsenet/types.hpp"

namespace sparsenet {

std::string format_double(double value);

DataMatrix read_data_csv(std::istream& in, const std::string& origin = "<stream>");
DataMatrix read_data_csv_file(const std::string& path);

void write_data_csv(std::ostream& out, const Matd& values,
                    const std::vector<std::string>& names = {});
void write_data_csv_file(const std::string& path, const Matd& values,
                         const std::vector<std::string>& names = {});

void write_matrix_csv(std::ostream& out, const Matd& values,
                      const std::vector<std::string>& names = {});
void write_matrix_csv_file(const std::string& path, const Matd& values,
                           const std::vector<std::string>& names = {});

Matd read_matrix_csv_file(const std::string& path);

// Edge list `i,j,value` for entries with |value| > threshold. Symmetric
// matrices emit the upper triangle (i < j); full matrices emit every ordered
// pair. Indices are 0-based.
void write_edge_list(std::ostream& out, const Matd& values, double threshold, bool symmetric);
void write_edge_list_file(const std::string& path, const Matd& values, double threshold,
                          bool symmetric);
void write_edge_list_file(const std::string& path, const SparseEstimate& estimate);

// beta_0 curve rows: lambda,beta0,edges.
void write_beta0_csv(std::ostream& out, const FiltrationResult& filtration);
void write_beta0_csv_file(const std::string& path, const FiltrationResult& filtration);

}  // namespace sparsenet
