#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fgr/baselines.hpp"
#include "fgr/graph.hpp"
#include "fgr/matrix.hpp"

namespace fgr {

/// Reported in place of +inf when the distances match exactly.
inline constexpr double kRelativeDistortionCapDb = 300.0;

struct DistortionReport {
  double eta = 0.0;
  double rd_db = 0.0;
  std::size_t n_pairs = 0;
};

struct PercolationReport {
  std::size_t p = 0;
  std::size_t k = 0;
  std::size_t largest_cluster_size = 0;
  double largest_fraction = 0.0;
  std::map<std::size_t, std::size_t> size_histogram;  // cluster size -> cluster count
};

/// Euclidean distances between all column pairs (i < j), in lexicographic
/// pair order. Throws std::invalid_argument when n < 2.
std::vector<double> pairwise_distance_vector(const DataMatrix& X);

/// Least-squares scale eta minimizing ||eta * reduced - original||^2.
/// Throws DegenerateFitError when every reduced distance is zero.
double fit_eta(std::span<const double> delta_reduced, std::span<const double> delta_orig);

/// -10 log10(||scaled - orig||^2 / ||orig||^2), capped at 300 dB. Higher is
/// better. Throws std::invalid_argument when orig is zero.
double relative_distortion(std::span<const double> delta_orig, std::span<const double> delta_scaled);

using ReducerFitter = std::function<ReducerModel(const DataMatrix& train)>;

/// Random half split of the samples: the reducer is fitted on the noisy
/// training half only, eta is fitted on the test half against clean test
/// distances, and RD compares clean distances with scaled reduced noisy ones.
/// The test half holds floor(n/2) samples; clean training samples are never
/// read.
DistortionReport distortion_protocol(const DataMatrix& S, const DataMatrix& X, const ReducerFitter& fit,
                                     std::uint64_t split_seed);

/// The (train, test) column indices used by distortion_protocol.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_halves(std::size_t n, std::uint64_t seed);

PercolationReport percolation_stats(const Partition& partition);

/// ||S - approx||_F^2 / n.
double mse_empirical(const DataMatrix& S, const DataMatrix& approx);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

std::string to_json(const DistortionReport& report);
std::string to_json(const PercolationReport& report);

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace fgr
