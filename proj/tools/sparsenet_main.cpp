// sparsenet command-line front end: one binary, one subcommand per pipeline
// stage. Outputs are CSV for matrices/curves and JSON for diagnostics; every
// JSON summary echoes the seed. Exit codes: 0 ok, 2 validation error,
// 3 convergence failure, 4 agreement failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "sparsenet/sparsenet.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sparsenet;

namespace {

struct GlobalConfig {
  std::string out_dir = ".";
  std::uint64_t seed = 42;
  int threads = 0;
};

std::string out_path(const GlobalConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  return (fs::path(cfg.out_dir) / name).string();
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

std::string indexed_name(const std::string& stem, size_t index, const std::string& ext) {
  std::ostringstream os;
  os << stem << '_' << std::setfill('0') << std::setw(3) << index << ext;
  return os.str();
}

DataMatrix load_data(const std::string& path) { return read_data_csv_file(path); }

json partition_to_json(const GraphPartition& part) {
  json j;
  j["kappa"] = part.kappa;
  j["labels"] = part.labels;
  j["components"] = part.components;
  return j;
}

LambdaGrid positive_grid(const SymmetricMatrix& s, Index count) {
  // Data-driven grid without the lambda = 0 point; glasso needs lambda > 0
  // whenever S is singular.
  LambdaGrid grid = lambda_grid_from_data(s, count + 1);
  if (grid.degenerate)
    throw ValidationError("matrix has no off-diagonal mass; no positive grid exists");
  grid.values.erase(grid.values.begin());
  return grid;
}

int cmd_synth(const GlobalConfig& cfg, Index n, Index p, const std::string& structure,
              Index blocks, double within, double between, double coupling,
              const std::string& output) {
  SynthSpec spec;
  if (structure == "iid-normal")
    spec.structure = SynthStructure::iid_normal;
  else if (structure == "planted-blocks")
    spec.structure = SynthStructure::planted_blocks;
  else if (structure == "chain-precision")
    spec.structure = SynthStructure::chain_precision;
  else
    throw ValidationError("unknown structure: " + structure);
  spec.blocks = blocks;
  spec.within = within;
  spec.between = between;
  spec.chain_coupling = coupling;

  const DataMatrix data = synth_data(n, p, spec, cfg.seed);
  write_data_csv_file(out_path(cfg, output), data.values, data.names);

  json j{{"command", "synth"}, {"seed", cfg.seed},   {"n", n},
         {"p", p},             {"structure", structure}, {"output", output}};
  if (spec.structure == SynthStructure::planted_blocks) {
    j["blocks"] = blocks;
    j["within"] = within;
    j["between"] = between;
  }
  if (spec.structure == SynthStructure::chain_precision) j["coupling"] = coupling;
  write_json_file(out_path(cfg, "synth.json"), j);
  std::cout << "wrote " << out_path(cfg, output) << " (" << n << "x" << p << ")\n";
  return 0;
}

int cmd_normalize(const GlobalConfig& cfg, const std::string& input, bool drop_constant) {
  const DataMatrix raw = load_data(input);
  const NormalizeResult<double> result = normalize(
      raw, drop_constant ? ConstantColumnPolicy::drop : ConstantColumnPolicy::fail);
  write_data_csv_file(out_path(cfg, "normalized.csv"), result.data.values, result.data.names);
  json j{{"command", "normalize"},
         {"seed", cfg.seed},
         {"n", result.data.n()},
         {"p", result.data.p()},
         {"kept", result.kept},
         {"dropped", result.dropped}};
  write_json_file(out_path(cfg, "normalize.json"), j);
  std::cout << "normalized " << result.data.n() << "x" << result.data.p() << " ("
            << result.dropped.size() << " constant columns dropped)\n";
  return 0;
}

int cmd_corr(const GlobalConfig& cfg, const std::string& input, double edge_threshold,
             bool emit_edges) {
  const DataMatrix data = normalize(load_data(input)).data;
  const SymmetricMatrix corr = sample_correlation(data);
  write_matrix_csv_file(out_path(cfg, "correlation.csv"), corr.entries, data.names);
  if (emit_edges)
    write_edge_list_file(out_path(cfg, "correlation_edges.csv"), corr.entries, edge_threshold,
                         /*symmetric=*/true);
  json j{{"command", "corr"}, {"seed", cfg.seed}, {"n", data.n()}, {"p", data.p()}};
  write_json_file(out_path(cfg, "corr.json"), j);
  std::cout << "wrote correlation matrix (" << data.p() << "x" << data.p() << ")\n";
  return 0;
}

int cmd_cross_corr(const GlobalConfig& cfg, const std::string& input_x,
                   const std::string& input_y, double edge_threshold, bool emit_edges) {
  const DataMatrix x = normalize(load_data(input_x)).data;
  const DataMatrix y = normalize(load_data(input_y)).data;
  const SymmetricMatrix cross = sample_cross_correlation(x, y);
  write_matrix_csv_file(out_path(cfg, "cross_correlation.csv"), cross.entries, x.names);
  if (emit_edges)
    write_edge_list_file(out_path(cfg, "cross_correlation_edges.csv"), cross.entries,
                         edge_threshold, /*symmetric=*/false);
  json j{{"command", "cross-corr"}, {"seed", cfg.seed}, {"n", x.n()}, {"p", x.p()}};
  write_json_file(out_path(cfg, "cross_corr.json"), j);
  std::cout << "wrote cross-correlation matrix (" << x.p() << "x" << x.p() << ")\n";
  return 0;
}

int cmd_rank(const GlobalConfig& cfg, const std::string& input, bool as_matrix, double tol) {
  SymmetricMatrix m;
  Index n = 0;
  if (as_matrix) {
    m = make_symmetric(read_matrix_csv_file(input), MatrixKind::covariance);
  } else {
    const DataMatrix data = normalize(load_data(input)).data;
    n = data.n();
    m = sample_correlation(data);
  }
  const RankDiagnostic d = rank_diagnostic(m, tol);
  json j{{"command", "rank"},
         {"seed", cfg.seed},
         {"dim", m.dim()},
         {"rank", d.rank},
         {"deficient", d.deficient},
         {"tol_used", d.tol_used},
         {"largest_singular_value", d.largest_singular_value}};
  if (n > 0) j["n"] = n;
  write_json_file(out_path(cfg, "rank.json"), j);
  std::cout << "rank " << d.rank << " of " << m.dim() << (d.deficient ? " (deficient)" : "")
            << "\n";
  return 0;
}

int cmd_sparse_corr(const GlobalConfig& cfg, const std::string& input, double lambda,
                    Index grid_count) {
  const DataMatrix data = normalize(load_data(input)).data;
  const SymmetricMatrix corr = sample_correlation(data);

  if (grid_count == 0) {
    const SparseEstimate est = sparse_correlation(corr, lambda);
    write_edge_list_file(out_path(cfg, "sparse_corr_edges.csv"), est);
    json j{{"command", "sparse-corr"}, {"seed", cfg.seed},  {"lambda", lambda},
           {"nnz", est.nnz},           {"p", est.dim}};
    write_json_file(out_path(cfg, "sparse_corr.json"), j);
    std::cout << "lambda " << lambda << ": nnz " << est.nnz << "\n";
    return 0;
  }

  const LambdaGrid grid = lambda_grid_from_data(corr, grid_count);
  json results = json::array();
  for (size_t t = 0; t < grid.size(); ++t) {
    const SparseEstimate est = sparse_correlation(corr, grid.values[t]);
    const std::string name = indexed_name("sparse_corr_edges", t, ".csv");
    write_edge_list_file(out_path(cfg, name), est);
    results.push_back({{"lambda", grid.values[t]}, {"nnz", est.nnz}, {"edges_file", name}});
  }
  json j{{"command", "sparse-corr"},
         {"seed", cfg.seed},
         {"p", corr.dim()},
         {"grid", grid.values},
         {"results", results}};
  write_json_file(out_path(cfg, "sparse_corr.json"), j);
  std::cout << "swept " << grid.size() << " lambda values\n";
  return 0;
}

int cmd_glasso(const GlobalConfig& cfg, const std::string& input, double lambda,
               Index grid_count, bool penalize_diagonal, double tol, Index max_sweeps,
               bool no_screen) {
  const DataMatrix data = normalize(load_data(input)).data;
  const SymmetricMatrix s = sample_correlation(data);
  GlassoOptions opts;
  opts.tol = tol;
  opts.max_sweeps = max_sweeps;
  opts.penalize_diagonal = penalize_diagonal;
  opts.threads = cfg.threads;

  auto solution_json = [&](const GlassoSolution& sol) {
    return json{{"lambda", sol.lambda},
                {"objective", sol.objective},
                {"iterations", sol.iterations},
                {"kkt_residual", sol.kkt_residual},
                {"converged", sol.converged},
                {"kappa", screen_partition(s, sol.lambda).kappa},
                {"nnz", static_cast<Index>(
                            zero_pattern_adjacency(sol.precision).edges.size() * 2)}};
  };

  if (grid_count == 0) {
    const GlassoSolution sol = no_screen ? glasso_fit(s, lambda, opts)
                                         : glasso_fit_screened(s, lambda, opts);
    write_edge_list_file(out_path(cfg, "precision_edges.csv"), sol.precision.entries, 1e-8,
                         /*symmetric=*/true);
    json j = solution_json(sol);
    j["command"] = "glasso";
    j["seed"] = cfg.seed;
    write_json_file(out_path(cfg, "glasso.json"), j);
    if (!sol.converged) {
      std::cerr << "glasso did not converge within " << max_sweeps << " sweeps\n";
      return 3;
    }
    std::cout << "glasso lambda " << lambda << ": objective " << sol.objective << ", kkt "
              << sol.kkt_residual << "\n";
    return 0;
  }

  const LambdaGrid grid = positive_grid(s, grid_count);
  const std::vector<GlassoSolution> path = glasso_path(s, grid, opts);
  json results = json::array();
  bool all_converged = true;
  for (size_t t = 0; t < path.size(); ++t) {
    const std::string name = indexed_name("precision_edges", t, ".csv");
    write_edge_list_file(out_path(cfg, name), path[t].precision.entries, 1e-8,
                         /*symmetric=*/true);
    json r = solution_json(path[t]);
    r["edges_file"] = name;
    results.push_back(std::move(r));
    all_converged = all_converged && path[t].converged;
  }
  json j{{"command", "glasso"},
         {"seed", cfg.seed},
         {"p", s.dim()},
         {"grid", grid.values},
         {"results", results}};
  write_json_file(out_path(cfg, "glasso.json"), j);
  if (!all_converged) {
    std::cerr << "glasso failed to converge at some grid points\n";
    return 3;
  }
  std::cout << "glasso path over " << grid.size() << " lambda values\n";
  return 0;
}

int cmd_partial(const GlobalConfig& cfg, const std::string& input, double lambda, bool lse,
                const std::string& rule, bool force_pinv, bool positive_only,
                double edge_threshold) {
  const DataMatrix raw = load_data(input);
  json j{{"command", "partial"}, {"seed", cfg.seed}, {"p", raw.p()}};

  Matd rho;
  if (lse) {
    rho = partial_from_residuals(center(raw), force_pinv).rho;
    j["method"] = "residual";
    j["lambda"] = nullptr;
    j["failed_nodes"] = json::array();
  } else {
    SparsePartialOptions opts;
    opts.rule = rule == "or" ? EdgeRule::either_nonzero : EdgeRule::both_nonzero;
    opts.threads = cfg.threads;
    const SparsePartialNetwork net =
        sparse_partial_network(normalize(raw).data, lambda, opts);
    rho = net.partial.rho;
    j["method"] = "sparse";
    j["lambda"] = lambda;
    j["rule"] = rule;
    j["failed_nodes"] = net.failed_nodes;
  }

  if (positive_only)
    rho = rho.unaryExpr([](double v) { return v > 0.0 ? v : 0.0; }).eval();

  Index edge_count = 0;
  for (Index jj = 0; jj < rho.cols(); ++jj)
    for (Index ii = 0; ii < jj; ++ii)
      if (std::abs(rho(ii, jj)) > edge_threshold) ++edge_count;
  write_edge_list_file(out_path(cfg, "partial_edges.csv"), rho, edge_threshold,
                       /*symmetric=*/true);
  j["edges"] = edge_count;
  write_json_file(out_path(cfg, "partial.json"), j);
  std::cout << "partial network: " << edge_count << " edges\n";
  return 0;
}

int cmd_filtration(const GlobalConfig& cfg, const std::string& input, Index grid_count,
                   const std::string& method, bool keep_edges, bool dump_adjacency,
                   double glasso_tol) {
  const DataMatrix data = normalize(load_data(input)).data;

  json j{{"command", "filtration"}, {"seed", cfg.seed}, {"p", data.p()}, {"method", method}};

  if (method == "corr") {
    // Grid and filtration both stream the correlation products in panels;
    // the dense p x p matrix is never materialized.
    const LambdaGrid grid = lambda_grid_from_data(data, grid_count);
    const FiltrationResult filt =
        build_filtration(data, grid, keep_edges || dump_adjacency);
    write_beta0_csv_file(out_path(cfg, "beta0.csv"), filt);
    if (grid.size() >= 2) {
      const NestednessReport nest = verify_nestedness(filt);
      j["node_nested"] = nest.node_nested;
      if (nest.edge_nested) j["edge_nested"] = *nest.edge_nested;
    }
    json parts = json::array();
    for (size_t t = 0; t < filt.grid.size(); ++t) {
      json entry = partition_to_json(filt.partitions[t]);
      entry["lambda"] = filt.grid.values[t];
      entry["edges"] = filt.edge_counts[t];
      parts.push_back(std::move(entry));
    }
    j["grid"] = filt.grid.values;
    j["beta0"] = filt.beta0;
    j["partitions"] = parts;
    if (dump_adjacency) {
      for (size_t t = 0; t < filt.grid.size(); ++t) {
        AdjacencyMatrix adj;
        adj.dim = data.p();
        adj.lambda = filt.grid.values[t];
        adj.edges = (*filt.edges)[t];
        const BlockPermutation bp = block_permutation(adj);
        write_matrix_csv_file(out_path(cfg, indexed_name("adjacency_perm", t, ".csv")),
                              adjacency_dense(adj, bp.order));
      }
      j["adjacency_dumps"] = true;
    }
    write_json_file(out_path(cfg, "partitions.json"), j);
    std::cout << "filtration over " << filt.grid.size() << " lambdas; beta0 "
              << filt.beta0.front() << " -> " << filt.beta0.back() << "\n";
    return 0;
  }

  if (method != "glasso") throw ValidationError("filtration method must be corr or glasso");

  const LambdaGrid grid = positive_grid(sample_correlation(data), grid_count);
  GlassoOptions opts;
  opts.tol = glasso_tol;
  opts.threads = cfg.threads;
  const GlassoFiltrationResult result = glasso_filtration(data, grid, opts);
  for (size_t t : result.skipped)
    std::cerr << "warning: glasso failed at grid index " << t << " (lambda "
              << grid.values[t] << "); point skipped\n";

  write_beta0_csv_file(out_path(cfg, "beta0.csv"), result.zero_pattern);
  write_beta0_csv_file(out_path(cfg, "beta0_threshold.csv"), result.threshold);

  json parts = json::array();
  for (size_t t = 0; t < grid.size(); ++t) {
    json entry;
    entry["lambda"] = grid.values[t];
    entry["zero_pattern"] = partition_to_json(result.zero_pattern.partitions[t]);
    entry["threshold"] = partition_to_json(result.threshold.partitions[t]);
    entry["partitions_equal"] = static_cast<bool>(result.partitions_equal[t]);
    parts.push_back(std::move(entry));
  }
  j["grid"] = grid.values;
  j["partitions"] = parts;
  j["all_partitions_equal"] = result.all_equal;
  j["skipped"] = result.skipped;
  if (grid.size() >= 2 && result.skipped.empty()) {
    const NestednessReport zp_nest = verify_nestedness(result.zero_pattern);
    j["node_nested"] = zp_nest.node_nested;
    // Edge nestedness of the zero-pattern family is observational only.
    if (zp_nest.edge_nested) j["edge_nested_observed"] = *zp_nest.edge_nested;
  }
  write_json_file(out_path(cfg, "partitions.json"), j);
  std::cout << "glasso filtration: partitions " << (result.all_equal ? "match" : "DIFFER")
            << " across " << grid.size() << " lambdas\n";
  return 0;
}

int cmd_bench(const GlobalConfig& cfg, std::vector<Index> n_list, std::vector<Index> p_list,
              Index grid_count) {
  const BenchReport report = bench_sparse_cross(n_list, p_list, grid_count, cfg.seed);
  write_bench_csv_file(out_path(cfg, "bench.csv"), report);
  json cells = json::array();
  for (const BenchCell& cell : report.cells)
    cells.push_back({{"n", cell.n}, {"p", cell.p}, {"agreement", cell.agreement}});
  json j{{"command", "bench"},
         {"seed", report.seed},
         {"grid", report.grid_count},
         {"fast_method", report.fast_method},
         {"baseline_method", report.baseline_method},
         {"cells", cells}};
  write_json_file(out_path(cfg, "bench.json"), j);
  for (const BenchCell& cell : report.cells)
    std::cout << "n=" << cell.n << " p=" << cell.p << ": soft " << cell.t_soft << "s, lasso "
              << cell.t_lasso << "s, ratio " << cell.ratio << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse correlation, cross-correlation, partial-correlation and glasso "
               "networks with beta0 filtration curves"};
  app.require_subcommand(1);
  app.set_config("--config")->description("config file mirroring flags; flags win");

  GlobalConfig cfg;
  app.add_option("-o,--out", cfg.out_dir, "output directory")->capture_default_str();
  app.add_option("--seed", cfg.seed, "seed for synthetic-data commands; echoed in outputs")
      ->capture_default_str();
  app.add_option("--threads", cfg.threads,
                 "worker threads (0 = SPARSENET_THREADS env or 1)")
      ->capture_default_str();

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic data matrix");
  Index synth_n = 10, synth_p = 20, synth_blocks = 2;
  double synth_within = 0.7, synth_between = 0.0, synth_coupling = 0.45;
  std::string synth_structure = "iid-normal", synth_output = "synth.csv";
  synth->add_option("--n", synth_n, "subjects (rows)")->required();
  synth->add_option("--p", synth_p, "nodes (columns)")->required();
  synth->add_option("--structure", synth_structure,
                    "iid-normal | planted-blocks | chain-precision")
      ->capture_default_str();
  synth->add_option("--blocks", synth_blocks, "planted-blocks: block count")
      ->capture_default_str();
  synth->add_option("--within", synth_within, "planted-blocks: within-block correlation")
      ->capture_default_str();
  synth->add_option("--between", synth_between, "planted-blocks: cross-block correlation")
      ->capture_default_str();
  synth->add_option("--coupling", synth_coupling, "chain-precision: off-diagonal value")
      ->capture_default_str();
  synth->add_option("--output", synth_output, "output file name")->capture_default_str();

  // normalize
  auto* normalize_cmd = app.add_subcommand("normalize", "center and unit-norm scale columns");
  std::string norm_input;
  bool norm_drop = false;
  normalize_cmd->add_option("--input", norm_input, "data CSV")->required();
  normalize_cmd->add_flag("--drop-constant", norm_drop,
                          "drop constant columns instead of failing");

  // corr
  auto* corr_cmd = app.add_subcommand("corr", "sample correlation matrix");
  std::string corr_input;
  double corr_edge_threshold = 0.0;
  bool corr_edges = false;
  corr_cmd->add_option("--input", corr_input, "data CSV")->required();
  corr_cmd->add_flag("--edges", corr_edges, "also write an edge list");
  corr_cmd->add_option("--edge-threshold", corr_edge_threshold, "|value| cutoff for edges")
      ->capture_default_str();

  // cross-corr
  auto* cross_cmd = app.add_subcommand("cross-corr", "sample cross-correlation matrix");
  std::string cross_input_x, cross_input_y;
  double cross_edge_threshold = 0.0;
  bool cross_edges = false;
  cross_cmd->add_option("--input", cross_input_x, "first data CSV")->required();
  cross_cmd->add_option("--input-y", cross_input_y, "second data CSV")->required();
  cross_cmd->add_flag("--edges", cross_edges, "also write an edge list");
  cross_cmd->add_option("--edge-threshold", cross_edge_threshold, "|value| cutoff for edges")
      ->capture_default_str();

  // rank
  auto* rank_cmd = app.add_subcommand("rank", "rank diagnostic of the sample correlation");
  std::string rank_input;
  bool rank_matrix = false;
  double rank_tol = -1.0;
  rank_cmd->add_option("--input", rank_input, "data CSV (or matrix CSV with --matrix)")
      ->required();
  rank_cmd->add_flag("--matrix", rank_matrix, "input is already a square matrix");
  rank_cmd->add_option("--tol", rank_tol, "singular value cutoff (default: dim*eps*largest)");

  // sparse-corr
  auto* scorr_cmd = app.add_subcommand("sparse-corr", "soft-threshold sparse correlations");
  std::string scorr_input;
  double scorr_lambda = 0.0;
  Index scorr_grid = 0;
  scorr_cmd->add_option("--input", scorr_input, "data CSV")->required();
  auto* scorr_lambda_opt = scorr_cmd->add_option("--lambda", scorr_lambda, "sparsity value");
  auto* scorr_grid_opt =
      scorr_cmd->add_option("--lambda-grid", scorr_grid, "sweep a data-driven grid");
  scorr_lambda_opt->excludes(scorr_grid_opt);
  scorr_grid_opt->excludes(scorr_lambda_opt);

  // glasso
  auto* glasso_cmd = app.add_subcommand("glasso", "L1-penalized inverse covariance");
  std::string glasso_input;
  double glasso_lambda = 0.0, glasso_tol = 1e-6;
  Index glasso_grid = 0, glasso_max_sweeps = 200;
  bool glasso_pen_diag = true, glasso_no_screen = false;
  glasso_cmd->add_option("--input", glasso_input, "data CSV")->required();
  auto* glasso_lambda_opt = glasso_cmd->add_option("--lambda", glasso_lambda, "sparsity value");
  auto* glasso_grid_opt =
      glasso_cmd->add_option("--lambda-grid", glasso_grid, "warm-started positive grid");
  glasso_lambda_opt->excludes(glasso_grid_opt);
  glasso_grid_opt->excludes(glasso_lambda_opt);
  glasso_cmd->add_option("--penalize-diagonal", glasso_pen_diag,
                         "penalize diagonal entries (default true)")
      ->capture_default_str();
  glasso_cmd->add_option("--tol", glasso_tol, "convergence tolerance")->capture_default_str();
  glasso_cmd->add_option("--max-sweeps", glasso_max_sweeps, "outer sweep budget")
      ->capture_default_str();
  glasso_cmd->add_flag("--no-screen", glasso_no_screen, "skip the screening decomposition");

  // partial
  auto* partial_cmd = app.add_subcommand("partial", "partial correlation network");
  std::string partial_input, partial_rule = "and";
  double partial_lambda = 0.0, partial_edge_threshold = 0.0;
  bool partial_lse = false, partial_force_pinv = false, partial_positive_only = false;
  partial_cmd->add_option("--input", partial_input, "data CSV")->required();
  auto* partial_lambda_opt =
      partial_cmd->add_option("--lambda", partial_lambda, "node-wise lasso penalty");
  auto* partial_lse_opt =
      partial_cmd->add_flag("--lse", partial_lse, "least-squares residual route (n > p)");
  partial_lambda_opt->excludes(partial_lse_opt);
  partial_lse_opt->excludes(partial_lambda_opt);
  partial_cmd->add_option("--rule", partial_rule, "edge symmetrization: and | or")
      ->capture_default_str();
  partial_cmd->add_flag("--force-pinv", partial_force_pinv,
                        "allow pseudo-inverse LSE when n <= p");
  partial_cmd->add_flag("--positive-only", partial_positive_only,
                        "keep only positive partial correlations");
  partial_cmd->add_option("--edge-threshold", partial_edge_threshold, "|rho| cutoff for edges")
      ->capture_default_str();

  // filtration
  auto* filt_cmd = app.add_subcommand("filtration", "beta0 curve over a lambda grid");
  std::string filt_input, filt_method = "corr";
  Index filt_grid = 100;
  bool filt_keep_edges = false, filt_dump_adjacency = false;
  double filt_glasso_tol = 1e-6;
  filt_cmd->add_option("--input", filt_input, "data CSV")->required();
  filt_cmd->add_option("--grid", filt_grid, "grid point count")->capture_default_str();
  filt_cmd->add_option("--method", filt_method, "corr | glasso")->capture_default_str();
  filt_cmd->add_flag("--keep-edges", filt_keep_edges, "retain per-lambda edge lists");
  filt_cmd->add_flag("--dump-adjacency", filt_dump_adjacency,
                     "write block-permuted adjacency matrices per lambda");
  filt_cmd->add_option("--glasso-tol", filt_glasso_tol, "glasso convergence tolerance")
      ->capture_default_str();

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "soft-threshold vs numeric lasso runtime");
  std::vector<Index> bench_n{5, 10}, bench_p{20, 50};
  Index bench_grid = 10;
  bench_cmd->add_option("--n-list", bench_n, "subject counts")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--p-list", bench_p, "node counts")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--grid", bench_grid, "lambda grid size")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*synth)
      return cmd_synth(cfg, synth_n, synth_p, synth_structure, synth_blocks, synth_within,
                       synth_between, synth_coupling, synth_output);
    if (*normalize_cmd) return cmd_normalize(cfg, norm_input, norm_drop);
    if (*corr_cmd) return cmd_corr(cfg, corr_input, corr_edge_threshold, corr_edges);
    if (*cross_cmd)
      return cmd_cross_corr(cfg, cross_input_x, cross_input_y, cross_edge_threshold,
                            cross_edges);
    if (*rank_cmd) return cmd_rank(cfg, rank_input, rank_matrix, rank_tol);
    if (*scorr_cmd) {
      if (scorr_lambda_opt->count() == 0 && scorr_grid_opt->count() == 0)
        throw ValidationError("sparse-corr needs --lambda or --lambda-grid");
      return cmd_sparse_corr(cfg, scorr_input, scorr_lambda, scorr_grid);
    }
    if (*glasso_cmd) {
      if (glasso_lambda_opt->count() == 0 && glasso_grid_opt->count() == 0)
        throw ValidationError("glasso needs --lambda or --lambda-grid");
      return cmd_glasso(cfg, glasso_input, glasso_lambda, glasso_grid, glasso_pen_diag,
                        glasso_tol, glasso_max_sweeps, glasso_no_screen);
    }
    if (*partial_cmd) {
      if (!partial_lse && partial_lambda_opt->count() == 0)
        throw ValidationError("partial needs --lambda or --lse");
      if (partial_rule != "and" && partial_rule != "or")
        throw ValidationError("--rule must be and | or");
      return cmd_partial(cfg, partial_input, partial_lambda, partial_lse, partial_rule,
                         partial_force_pinv, partial_positive_only, partial_edge_threshold);
    }
    if (*filt_cmd)
      return cmd_filtration(cfg, filt_input, filt_grid, filt_method, filt_keep_edges,
                            filt_dump_adjacency, filt_glasso_tol);
    if (*bench_cmd) return cmd_bench(cfg, bench_n, bench_p, bench_grid);
  } catch (const AgreementError& e) {
    std::cerr << "agreement failure: " << e.what() << "\n";
    return 4;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
