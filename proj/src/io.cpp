#include "sparsenet/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace sparsenet {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

bool parse_double(const std::string& token, double& value) {
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  return ec == std::errc() && ptr == end && !token.empty();
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path + " for writing");
  return out;
}

std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  return in;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 48> buf;
  const auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
  if (ec != std::errc()) throw Error("format_double failed");
  return std::string(buf.data(), ptr);
}

namespace {

struct CsvTable {
  Matd values;
  std::vector<std::string> names;
};

CsvTable read_csv_table(std::istream& in, const std::string& origin) {
  std::vector<std::vector<double>> rows;
  std::vector<std::string> names;
  std::string line;
  size_t line_no = 0;
  size_t width = 0;
  bool saw_header = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);

    std::vector<double> row(fields.size());
    bool all_numeric = true;
    for (size_t k = 0; k < fields.size(); ++k)
      if (!parse_double(fields[k], row[k])) {
        all_numeric = false;
        break;
      }

    if (!all_numeric) {
      if (rows.empty() && !saw_header) {
        names = fields;
        saw_header = true;
        width = fields.size();
        continue;
      }
      throw ValidationError(origin + ":" + std::to_string(line_no) + ": non-numeric field");
    }
    if (width == 0) width = fields.size();
    if (fields.size() != width)
      throw ValidationError(origin + ":" + std::to_string(line_no) + ": ragged row (" +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(width) + ")");
    for (double v : row)
      if (!std::isfinite(v))
        throw NonFiniteError(origin + ":" + std::to_string(line_no) + ": non-finite value");
    rows.push_back(std::move(row));
  }

  if (rows.empty()) throw ValidationError(origin + ": no data rows");
  Matd values(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < width; ++j)
      values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  return {std::move(values), std::move(names)};
}

}  // namespace

DataMatrix read_data_csv(std::istream& in, const std::string& origin) {
  CsvTable table = read_csv_table(in, origin);
  return make_data_matrix(std::move(table.values), Normalization::raw, std::move(table.names));
}

DataMatrix read_data_csv_file(const std::string& path) {
  std::ifstream in = open_for_read(path);
  return read_data_csv(in, path);
}

namespace {

void write_table(std::ostream& out, const Matd& values, const std::vector<std::string>& names) {
  if (!names.empty()) {
    for (Index j = 0; j < values.cols(); ++j) {
      if (j) out << ',';
      out << names[static_cast<size_t>(j)];
    }
    out << '\n';
  }
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) {
      if (j) out << ',';
      out << format_double(values(i, j));
    }
    out << '\n';
  }
}

}  // namespace

void write_data_csv(std::ostream& out, const Matd& values,
                    const std::vector<std::string>& names) {
  write_table(out, values, names);
}

void write_data_csv_file(const std::string& path, const Matd& values,
                         const std::vector<std::string>& names) {
  std::ofstream out = open_for_write(path);
  write_data_csv(out, values, names);
}

void write_matrix_csv(std::ostream& out, const Matd& values,
                      const std::vector<std::string>& names) {
  write_table(out, values, names);
}

void write_matrix_csv_file(const std::string& path, const Matd& values,
                           const std::vector<std::string>& names) {
  std::ofstream out = open_for_write(path);
  write_matrix_csv(out, values, names);
}

Matd read_matrix_csv_file(const std::string& path) {
  std::ifstream in = open_for_read(path);
  return read_csv_table(in, path).values;
}

void write_edge_list(std::ostream& out, const Matd& values, double threshold, bool symmetric) {
  out << "i,j,value\n";
  for (Index j = 0; j < values.cols(); ++j) {
    const Index row_end = symmetric ? j : values.rows();
    for (Index i = 0; i < row_end; ++i) {
      if (i == j) continue;
      if (std::abs(values(i, j)) > threshold)
        out << i << ',' << j << ',' << format_double(values(i, j)) << '\n';
    }
  }
}

void write_edge_list_file(const std::string& path, const Matd& values, double threshold,
                          bool symmetric) {
  std::ofstream out = open_for_write(path);
  write_edge_list(out, values, threshold, symmetric);
}

void write_edge_list_file(const std::string& path, const SparseEstimate& estimate) {
  std::ofstream out = open_for_write(path);
  out << "i,j,value\n";
  const bool symmetric = estimate.source == EstimateSource::correlation;
  estimate.for_each_nonzero([&](Index i, Index j, double v) {
    if (symmetric && i >= j) return;
    out << i << ',' << j << ',' << format_double(v) << '\n';
  });
}

void write_beta0_csv(std::ostream& out, const FiltrationResult& filtration) {
  out << "lambda,beta0,edges\n";
  for (size_t t = 0; t < filtration.grid.size(); ++t)
    out << format_double(filtration.grid.values[t]) << ',' << filtration.beta0[t] << ','
        << filtration.edge_counts[t] << '\n';
}

void write_beta0_csv_file(const std::string& path, const FiltrationResult& filtration) {
  std::ofstream out = open_for_write(path);
  write_beta0_csv(out, filtration);
}

}  // namespace sparsenet
