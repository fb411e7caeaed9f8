#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fgr/baselines.hpp"
#include "fgr/graph.hpp"
#include "fgr/matrix.hpp"
#include "fgr/rena.hpp"

namespace fgr::cli {

/// Runs the command line. Returns the process exit code: 0 on success, 2 on
/// usage errors, 1 on any other failure (one line on `err`).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Fits `method` on `train` and wraps the result as a reducer. Methods:
/// rena, single, ward, downsample, nystrom, random_projection, identity.
/// `k` is the output dimension (for nystrom: sampled columns).
ReducerModel fit_reducer(const std::string& method, const DataMatrix& train, const StructureGraph& g,
                         std::span<const std::size_t> dims, std::size_t k, std::uint64_t seed,
                         std::size_t ward_max_features = kWardDefaultMaxFeatures);

/// Output dimension for a reduction ratio: floor(fraction * p), or
/// floor(fraction * n_train) for nystrom, clamped to at least 1.
std::size_t k_for_fraction(const std::string& method, double fraction, std::size_t p, std::size_t n_train);

std::vector<std::size_t> parse_dims(const std::string& text);

struct SynthArgs {
  std::vector<std::size_t> dims;
  double fwhm = 8.0;
  std::size_t n = 100;
  double snr_db = 2.06;
  std::uint64_t seed = 0;
  std::string clean_out = "clean.fgm";
  std::string noisy_out = "noisy.fgm";
};

/// Writes clean and noisy matrices; returns the measured SNR in dB.
double cmd_synth(const SynthArgs& args, std::ostream& out);

struct ClusterArgs {
  std::string method = "rena";
  std::string data;
  std::vector<std::size_t> dims;
  std::string graph;
  std::optional<std::size_t> k;
  std::optional<double> k_fraction;
  std::size_t ward_max_features = kWardDefaultMaxFeatures;
  std::uint64_t seed = 0;
  std::string out = "partition.txt";
  std::string trace_out;
};

struct ClusterOutcome {
  Partition partition;
  std::optional<RenaTrace> trace;
  double fit_seconds = 0.0;
};

ClusterOutcome cmd_cluster(const ClusterArgs& args, std::ostream& out);

struct BenchDistortionArgs {
  std::vector<std::string> methods{"rena", "single", "ward"};
  std::vector<double> k_fractions{0.05};
  std::string clean;
  std::string noisy;
  std::vector<std::size_t> dims;
  std::string graph;
  std::size_t repeats = 10;
  std::size_t ward_max_features = kWardDefaultMaxFeatures;
  std::uint64_t seed = 0;
  std::string out = "distortion.csv";
};

struct DistortionRow {
  std::string method;
  double k_fraction;
  std::size_t repeat;
  double rd_db;
  double fit_seconds;
};

std::vector<DistortionRow> cmd_bench_distortion(const BenchDistortionArgs& args, std::ostream& out);

struct BenchPercolationArgs {
  std::vector<std::string> methods{"rena", "single", "ward"};
  std::vector<double> k_fractions{0.01, 0.02, 0.05, 0.1, 0.2};
  std::string data;
  std::vector<std::size_t> dims;
  std::string graph;
  std::size_t repeats = 1;
  std::size_t ward_max_features = kWardDefaultMaxFeatures;
  std::uint64_t seed = 0;
  std::string out = "percolation.csv";
};

struct PercolationRow {
  std::string method;
  double k_fraction;
  std::size_t repeat;
  std::size_t k;
  std::size_t largest_cluster_size;
  double largest_fraction;
};

std::vector<PercolationRow> cmd_bench_percolation(const BenchPercolationArgs& args, std::ostream& out);

struct BenchTimeArgs {
  std::vector<std::size_t> sizes{8, 16, 32};
  std::vector<std::string> methods{"rena", "single"};
  std::size_t n = 10;
  double fwhm = 8.0;
  double snr_db = 2.06;
  std::size_t repeats = 10;
  std::size_t ward_max_features = kWardDefaultMaxFeatures;
  std::uint64_t seed = 0;
  std::string out = "timing.csv";
};

struct TimingRow {
  std::string method;
  std::size_t side;
  std::size_t p;
  std::size_t k;
  std::size_t repeat;
  double fit_seconds;
};

struct TimingSummary {
  std::vector<TimingRow> rows;
  std::vector<std::pair<std::string, double>> slopes;  // log-log slope of mean fit time vs p
};

TimingSummary cmd_bench_time(const BenchTimeArgs& args, std::ostream& out);

}  // namespace fgr::cli
