#include "fgr/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "fgr/error.hpp"
#include "fgr/io.hpp"
#include "fgr/metrics.hpp"
#include "fgr/random.hpp"
#include "fgr/synthdata.hpp"

namespace fgr::cli {

namespace {

StructureGraph load_structure(const std::vector<std::size_t>& dims, const std::string& graph_path, std::size_t p) {
  StructureGraph g;
  if (!graph_path.empty())
    g = io::read_graph(graph_path);
  else if (!dims.empty())
    g = build_lattice_graph(dims);
  else
    throw std::invalid_argument("either --dims or --graph is required");
  if (g.vertex_count() != p) {
    throw std::invalid_argument("graph has " + std::to_string(g.vertex_count()) + " vertices but data has " +
                                std::to_string(p) + " features");
  }
  return g;
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss << std::setprecision(10) << v;
  return ss.str();
}

std::ofstream open_csv(const std::string& path, const char* header) {
  std::ofstream csv(path, std::ios::trunc);
  if (!csv) throw std::runtime_error("cannot open " + path + " for writing");
  csv << header << '\n';
  return csv;
}

std::uint64_t repeat_seed(std::uint64_t seed, std::size_t repeat) { return mix64(seed) + repeat; }

bool is_clustering(const std::string& method) {
  return method == "rena" || method == "single" || method == "ward" || method == "downsample";
}

}  // namespace

std::vector<std::size_t> parse_dims(const std::string& text) {
  std::vector<std::size_t> dims;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != tok.size() || tok.empty() || tok[0] == '-') throw std::invalid_argument("bad dimension '" + tok + "'");
    if (v == 0) throw std::invalid_argument("dimensions must be >= 1");
    dims.push_back(v);
  }
  if (dims.empty() || dims.size() > 3) throw std::invalid_argument("expected 1 to 3 dimensions, got '" + text + "'");
  return dims;
}

std::size_t k_for_fraction(const std::string& method, double fraction, std::size_t p, std::size_t n_train) {
  if (!(fraction > 0.0) || fraction > 1.0) throw std::invalid_argument("k fraction must be in (0, 1]");
  const std::size_t base = method == "nystrom" ? n_train : p;
  auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(base) + 1e-9));
  return std::max<std::size_t>(k, 1);
}

ReducerModel fit_reducer(const std::string& method, const DataMatrix& train, const StructureGraph& g,
                         std::span<const std::size_t> dims, std::size_t k, std::uint64_t seed,
                         std::size_t ward_max_features) {
  if (method == "rena") return ReducerModel::feature_grouping(rena(train, g, k).partition);
  if (method == "single") return ReducerModel::feature_grouping(single_linkage(train, g, k));
  if (method == "ward") return ReducerModel::feature_grouping(ward_linkage(train, g, k, ward_max_features));
  if (method == "identity") return ReducerModel::feature_grouping(Partition::singletons(train.p()));
  if (method == "downsample") {
    if (dims.empty()) throw std::invalid_argument("downsample needs lattice --dims");
    return ReducerModel::downsampling(downsampling_operator(dims, k));
  }
  if (method == "nystrom") return {ReducerKind::nystrom, nystrom_fit(train, k, seed)};
  if (method == "random_projection") return {ReducerKind::random_projection, SparseRandomProjection(train.p(), k, seed)};
  throw std::invalid_argument("unknown method '" + method + "'");
}

// synth ----------------------------------------------------------------------------

double cmd_synth(const SynthArgs& args, std::ostream& out) {
  auto set = make_synthetic(args.dims, args.fwhm, args.n, args.snr_db, args.seed);
  io::save_matrix(set.clean, args.clean_out);
  io::save_matrix(set.noisy, args.noisy_out);
  DataMatrix noise = set.noisy;
  for (std::size_t i = 0; i < noise.values().size(); ++i) noise.values()[i] -= set.clean.values()[i];
  const double snr = measured_snr(set.clean, noise);
  out << "p=" << set.clean.p() << " n=" << set.clean.n() << " sigma=" << fmt(set.noise.sigma)
      << " measured_snr_db=" << fmt(snr) << '\n';
  return snr;
}

// cluster --------------------------------------------------------------------------

ClusterOutcome cmd_cluster(const ClusterArgs& args, std::ostream& out) {
  if (!is_clustering(args.method)) throw std::invalid_argument("unknown clustering method '" + args.method + "'");
  DataMatrix X = io::load_matrix(args.data);
  StructureGraph g = load_structure(args.dims, args.graph, X.p());
  const std::size_t k = args.k ? *args.k : k_for_fraction(args.method, args.k_fraction.value_or(0.05), X.p(), X.n());

  ClusterOutcome outcome;
  Stopwatch clock;
  if (args.method == "rena") {
    auto result = rena(X, g, k);
    outcome.partition = std::move(result.partition);
    outcome.trace = result.trace;
  } else if (args.method == "single") {
    outcome.partition = single_linkage(X, g, k);
  } else if (args.method == "ward") {
    outcome.partition = ward_linkage(X, g, k, args.ward_max_features);
  } else {
    if (args.dims.empty()) throw std::invalid_argument("downsample needs lattice --dims");
    outcome.partition = downsampling_operator(args.dims, k).partition();
  }
  outcome.fit_seconds = clock.seconds();

  io::write_partition(outcome.partition, args.out);
  nlohmann::json trace{{"method", args.method}, {"p", X.p()}, {"k", outcome.partition.k()}};
  if (outcome.trace) {
    trace["iterations"] = outcome.trace->iterations;
    trace["cluster_counts"] = outcome.trace->cluster_counts;
    trace["pruned_edges"] = outcome.trace->pruned_edges;
  }
  if (!args.trace_out.empty()) io::write_file(args.trace_out, trace.dump(2) + "\n");
  trace["fit_seconds"] = outcome.fit_seconds;
  out << trace.dump() << '\n';
  return outcome;
}

// bench-distortion -------------------------------------------------------------------

std::vector<DistortionRow> cmd_bench_distortion(const BenchDistortionArgs& args, std::ostream& out) {
  DataMatrix S = io::load_matrix(args.clean);
  DataMatrix X = io::load_matrix(args.noisy);
  StructureGraph g = load_structure(args.dims, args.graph, X.p());
  if (args.repeats == 0) throw std::invalid_argument("--repeats must be >= 1");
  const std::size_t n_train = X.n() - X.n() / 2;

  auto csv = open_csv(args.out, "method,k_fraction,repeat,rd_db,fit_seconds");
  std::vector<DistortionRow> rows;
  for (const auto& method : args.methods) {
    for (double fraction : args.k_fractions) {
      const std::size_t k = k_for_fraction(method, fraction, X.p(), n_train);
      double sum = 0.0;
      std::size_t fitted_k = k;
      for (std::size_t r = 0; r < args.repeats; ++r) {
        const std::uint64_t seed = repeat_seed(args.seed, r);
        double fit_seconds = 0.0;
        auto report = distortion_protocol(
            S, X,
            [&](const DataMatrix& train) {
              Stopwatch clock;
              auto model = fit_reducer(method, train, g, args.dims, k, seed, args.ward_max_features);
              fit_seconds = clock.seconds();
              fitted_k = model.k();
              return model;
            },
            seed);
        rows.push_back({method, fraction, r, report.rd_db, fit_seconds});
        csv << method << ',' << fmt(fraction) << ',' << r << ',' << fmt(report.rd_db) << ',' << fmt(fit_seconds) << '\n';
        sum += report.rd_db;
      }
      out << method << " k_fraction=" << fmt(fraction) << " k=" << fitted_k
          << " mean_rd_db=" << fmt(sum / static_cast<double>(args.repeats)) << '\n';
    }
  }
  return rows;
}

// bench-percolation ------------------------------------------------------------------

std::vector<PercolationRow> cmd_bench_percolation(const BenchPercolationArgs& args, std::ostream& out) {
  DataMatrix X = io::load_matrix(args.data);
  StructureGraph g = load_structure(args.dims, args.graph, X.p());
  if (args.repeats == 0) throw std::invalid_argument("--repeats must be >= 1");
  for (const auto& m : args.methods)
    if (!is_clustering(m)) throw std::invalid_argument("percolation needs a clustering method, got '" + m + "'");

  auto csv = open_csv(args.out, "method,k_fraction,repeat,k,largest_cluster_size,largest_fraction");
  std::vector<PercolationRow> rows;
  for (std::size_t r = 0; r < args.repeats; ++r) {
    // With one repeat every sample is used; otherwise each repeat fits on a random half.
    DataMatrix train = args.repeats == 1 ? X : X.select_columns(split_halves(X.n(), repeat_seed(args.seed, r)).first);
    for (const auto& method : args.methods) {
      for (double fraction : args.k_fractions) {
        const std::size_t k = k_for_fraction(method, fraction, X.p(), train.n());
        auto model = fit_reducer(method, train, g, args.dims, k, repeat_seed(args.seed, r), args.ward_max_features);
        auto stats = percolation_stats(std::get<FeatureGroupingOperator>(model.payload()).partition());
        rows.push_back({method, fraction, r, stats.k, stats.largest_cluster_size, stats.largest_fraction});
      }
    }
  }
  for (const auto& row : rows) {
    csv << row.method << ',' << fmt(row.k_fraction) << ',' << row.repeat << ',' << row.k << ','
        << row.largest_cluster_size << ',' << fmt(row.largest_fraction) << '\n';
  }
  out << rows.size() << " rows written to " << args.out << '\n';
  return rows;
}

// bench-time ---------------------------------------------------------------------------

TimingSummary cmd_bench_time(const BenchTimeArgs& args, std::ostream& out) {
  if (args.sizes.size() < 2) throw std::invalid_argument("--sizes needs at least two cube sizes");
  if (args.repeats == 0) throw std::invalid_argument("--repeats must be >= 1");
  // Refuse before any timing rather than failing halfway through the grid.
  if (std::find(args.methods.begin(), args.methods.end(), "ward") != args.methods.end()) {
    for (std::size_t side : args.sizes) {
      if (side * side * side > args.ward_max_features) {
        throw std::invalid_argument("ward: cube side " + std::to_string(side) + " exceeds --ward-max-features " +
                                    std::to_string(args.ward_max_features));
      }
    }
  }
  auto csv = open_csv(args.out, "method,side,p,k,repeat,fit_seconds");
  TimingSummary summary;
  std::map<std::string, std::vector<std::pair<double, double>>> means;  // method -> (p, mean seconds)
  for (std::size_t side : args.sizes) {
    const std::vector<std::size_t> dims{side, side, side};
    const StructureGraph g = build_lattice_graph(dims);
    const std::size_t p = g.vertex_count();
    const std::size_t k = std::max<std::size_t>(p / 20, 1);
    // Each repeat times a fresh realization, so no repeat reruns an input
    // that is already hot in cache.
    std::vector<DataMatrix> draws;
    for (std::size_t r = 0; r < args.repeats; ++r)
      draws.push_back(make_synthetic(dims, args.fwhm, args.n, args.snr_db, repeat_seed(args.seed, r)).noisy);
    for (const auto& method : args.methods) {
      double total = 0.0;
      for (std::size_t r = 0; r < args.repeats; ++r) {
        const DataMatrix& data = draws[r];
        Stopwatch clock;
        auto model = fit_reducer(method, data, g, dims, method == "nystrom" ? std::max<std::size_t>(args.n / 10, 1) : k,
                                 repeat_seed(args.seed, r), args.ward_max_features);
        const double seconds = clock.seconds();
        total += seconds;
        summary.rows.push_back({method, side, p, model.k(), r, seconds});
        csv << method << ',' << side << ',' << p << ',' << model.k() << ',' << r << ',' << fmt(seconds) << '\n';
      }
      means[method].emplace_back(static_cast<double>(p), total / static_cast<double>(args.repeats));
    }
  }
  for (const auto& method : args.methods) {
    std::vector<double> ps, ts;
    for (auto [p, t] : means[method]) {
      ps.push_back(p);
      ts.push_back(t);
    }
    const double slope = loglog_slope(ps, ts);
    summary.slopes.emplace_back(method, slope);
    out << "slope " << method << ' ' << fmt(slope) << '\n';
  }
  return summary;
}

// Command line -------------------------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Feature-grouping dimension reduction: ReNA clustering, baselines and benchmarks", "fgr"};
  app.set_config("--config", "", "key=value config file mirroring the flags");
  app.require_subcommand(1);

  // Kept as text pieces so that "20,20,20" reads the same from flags and config files.
  std::vector<std::string> dims_parts;
  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate smooth random fields plus Gaussian noise");
  synth_cmd->add_option("--dims", dims_parts, "Lattice shape, e.g. 20,20,20")->delimiter(',')->required();
  synth_cmd->add_option("--fwhm", synth.fwhm, "Smoothing kernel FWHM in voxels")->capture_default_str();
  synth_cmd->add_option("--n", synth.n, "Number of samples")->capture_default_str();
  synth_cmd->add_option("--snr-db", synth.snr_db, "Target SNR in dB")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("--clean-out", synth.clean_out, "Clean matrix output")->capture_default_str();
  synth_cmd->add_option("--noisy-out", synth.noisy_out, "Noisy matrix output")->capture_default_str();

  ClusterArgs cluster;
  std::size_t cluster_k = 0;
  double cluster_fraction = 0.0;
  auto* cluster_cmd = app.add_subcommand("cluster", "Cluster the features of a data matrix");
  cluster_cmd->add_option("--method", cluster.method, "rena, single, ward or downsample")
      ->check(CLI::IsMember({"rena", "single", "ward", "downsample"}))
      ->capture_default_str();
  cluster_cmd->add_option("--data", cluster.data, "Data matrix (FGM1 or .csv)")->required();
  cluster_cmd->add_option("--dims", dims_parts, "Lattice shape")->delimiter(',');
  cluster_cmd->add_option("--graph", cluster.graph, "Graph edge-list file");
  auto* k_opt = cluster_cmd->add_option("--k", cluster_k, "Number of clusters");
  auto* frac_opt = cluster_cmd->add_option("--k-fraction", cluster_fraction, "Clusters as a fraction of p (default 0.05)");
  k_opt->excludes(frac_opt);
  cluster_cmd->add_option("--ward-max-features", cluster.ward_max_features, "Largest p Ward will run on")
      ->capture_default_str();
  cluster_cmd->add_option("--seed", cluster.seed, "Random seed")->capture_default_str();
  cluster_cmd->add_option("--out", cluster.out, "Partition output")->capture_default_str();
  cluster_cmd->add_option("--trace-out", cluster.trace_out, "JSON trace output");

  BenchDistortionArgs distortion;
  auto* dist_cmd = app.add_subcommand("bench-distortion", "Relative distortion of reduced noisy data");
  dist_cmd->add_option("--methods", distortion.methods, "Methods")->delimiter(',')->capture_default_str();
  dist_cmd->add_option("--k-fractions", distortion.k_fractions, "Reduction ratios k/p")->delimiter(',')->capture_default_str();
  dist_cmd->add_option("--clean", distortion.clean, "Clean matrix")->required();
  dist_cmd->add_option("--noisy", distortion.noisy, "Noisy matrix")->required();
  dist_cmd->add_option("--dims", dims_parts, "Lattice shape")->delimiter(',');
  dist_cmd->add_option("--graph", distortion.graph, "Graph edge-list file");
  dist_cmd->add_option("--repeats", distortion.repeats, "Split seeds per configuration")->capture_default_str();
  dist_cmd->add_option("--ward-max-features", distortion.ward_max_features, "Largest p Ward will run on")
      ->capture_default_str();
  dist_cmd->add_option("--seed", distortion.seed, "Random seed")->capture_default_str();
  dist_cmd->add_option("--out", distortion.out, "CSV output")->capture_default_str();

  BenchPercolationArgs percolation;
  auto* perc_cmd = app.add_subcommand("bench-percolation", "Largest cluster fraction against k");
  perc_cmd->add_option("--methods", percolation.methods, "Methods")->delimiter(',')->capture_default_str();
  perc_cmd->add_option("--k-fractions", percolation.k_fractions, "Reduction ratios k/p")->delimiter(',')->capture_default_str();
  perc_cmd->add_option("--data", percolation.data, "Data matrix")->required();
  perc_cmd->add_option("--dims", dims_parts, "Lattice shape")->delimiter(',');
  perc_cmd->add_option("--graph", percolation.graph, "Graph edge-list file");
  perc_cmd->add_option("--repeats", percolation.repeats, "Repeats")->capture_default_str();
  perc_cmd->add_option("--ward-max-features", percolation.ward_max_features, "Largest p Ward will run on")
      ->capture_default_str();
  perc_cmd->add_option("--seed", percolation.seed, "Random seed")->capture_default_str();
  perc_cmd->add_option("--out", percolation.out, "CSV output")->capture_default_str();

  BenchTimeArgs timing;
  auto* time_cmd = app.add_subcommand("bench-time", "Fit time against p on synthetic cubes, k = floor(p/20)");
  time_cmd->add_option("--sizes", timing.sizes, "Cube side lengths")->delimiter(',')->capture_default_str();
  time_cmd->add_option("--methods", timing.methods, "Methods")->delimiter(',')->capture_default_str();
  time_cmd->add_option("--n", timing.n, "Samples per cube")->capture_default_str();
  time_cmd->add_option("--fwhm", timing.fwhm, "Smoothing FWHM")->capture_default_str();
  time_cmd->add_option("--snr-db", timing.snr_db, "SNR in dB")->capture_default_str();
  time_cmd->add_option("--repeats", timing.repeats, "Repeats per size")->capture_default_str();
  time_cmd->add_option("--ward-max-features", timing.ward_max_features, "Largest p Ward will run on")
      ->capture_default_str();
  time_cmd->add_option("--seed", timing.seed, "Random seed")->capture_default_str();
  time_cmd->add_option("--out", timing.out, "CSV output")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << " (see --help)\n";
    return 2;
  }

  try {
    std::string dims_text;
    for (const auto& part : dims_parts) dims_text += (dims_text.empty() ? "" : ",") + part;
    std::vector<std::size_t> dims = dims_parts.empty() ? std::vector<std::size_t>{} : parse_dims(dims_text);
    if (synth_cmd->parsed()) {
      synth.dims = dims;
      cmd_synth(synth, out);
    } else if (cluster_cmd->parsed()) {
      cluster.dims = dims;
      if (k_opt->count()) cluster.k = cluster_k;
      if (frac_opt->count()) cluster.k_fraction = cluster_fraction;
      cmd_cluster(cluster, out);
    } else if (dist_cmd->parsed()) {
      distortion.dims = dims;
      cmd_bench_distortion(distortion, out);
    } else if (perc_cmd->parsed()) {
      percolation.dims = dims;
      cmd_bench_percolation(percolation, out);
    } else if (time_cmd->parsed()) {
      cmd_bench_time(timing, out);
    }
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: " << msg << '\n';
    return 1;
  }
  return 0;
}

}  // namespace fgr::cli
