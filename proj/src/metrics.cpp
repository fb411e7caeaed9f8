#include "fgr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "fgr/error.hpp"
#include "fgr/random.hpp"

namespace fgr {

std::vector<double> pairwise_distance_vector(const DataMatrix& X) {
  if (X.n() < 2) throw std::invalid_argument("pairwise distances need at least 2 samples");
  std::vector<double> out;
  out.reserve(X.n() * (X.n() - 1) / 2);
  for (std::size_t i = 0; i < X.n(); ++i) {
    auto a = X.column(i);
    for (std::size_t j = i + 1; j < X.n(); ++j) {
      auto b = X.column(j);
      double acc = 0.0;
      for (std::size_t f = 0; f < a.size(); ++f) {
        double d = a[f] - b[f];
        acc += d * d;
      }
      out.push_back(std::sqrt(acc));
    }
  }
  return out;
}

double fit_eta(std::span<const double> delta_reduced, std::span<const double> delta_orig) {
  if (delta_reduced.size() != delta_orig.size() || delta_reduced.empty())
    throw std::invalid_argument("fit_eta: need equal, non-empty distance vectors");
  const double rr = dot(delta_reduced, delta_reduced);
  if (rr == 0.0) throw DegenerateFitError("fit_eta: all reduced distances are zero");
  return dot(delta_reduced, delta_orig) / rr;
}

double relative_distortion(std::span<const double> delta_orig, std::span<const double> delta_scaled) {
  if (delta_orig.size() != delta_scaled.size()) throw std::invalid_argument("relative_distortion: length mismatch");
  const double denom = squared_norm(delta_orig);
  if (denom == 0.0) throw std::invalid_argument("relative_distortion: original distances are all zero");
  double err = 0.0;
  for (std::size_t i = 0; i < delta_orig.size(); ++i) {
    double d = delta_scaled[i] - delta_orig[i];
    err += d * d;
  }
  if (err == 0.0) return kRelativeDistortionCapDb;
  return std::min(kRelativeDistortionCapDb, -10.0 * std::log10(err / denom));
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_halves(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto rng = substream(seed, 0);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);
  const std::size_t m = n / 2;
  std::vector<std::size_t> test(order.begin(), order.begin() + m);
  std::vector<std::size_t> train(order.begin() + m, order.end());
  std::sort(test.begin(), test.end());
  std::sort(train.begin(), train.end());
  return {std::move(train), std::move(test)};
}

DistortionReport distortion_protocol(const DataMatrix& S, const DataMatrix& X, const ReducerFitter& fit,
                                     std::uint64_t split_seed) {
  if (S.p() != X.p() || S.n() != X.n()) throw std::invalid_argument("distortion_protocol: S and X differ in shape");
  if (X.n() < 4) throw std::invalid_argument("distortion_protocol: need at least 4 samples");
  auto [train, test] = split_halves(X.n(), split_seed);
  ReducerModel model = fit(X.select_columns(train));
  if (model.p() != X.p()) throw std::invalid_argument("distortion_protocol: reducer fitted for wrong p");

  auto delta_orig = pairwise_distance_vector(S.select_columns(test));
  auto delta_red = pairwise_distance_vector(model.reduce(X.select_columns(test)));
  DistortionReport report;
  report.n_pairs = delta_orig.size();
  report.eta = fit_eta(delta_red, delta_orig);
  for (double& d : delta_red) d *= report.eta;
  report.rd_db = relative_distortion(delta_orig, delta_red);
  return report;
}

PercolationReport percolation_stats(const Partition& partition) {
  if (partition.p() == 0) throw std::invalid_argument("percolation_stats: empty partition");
  PercolationReport r;
  r.p = partition.p();
  r.k = partition.k();
  for (auto size : partition.sizes()) {
    ++r.size_histogram[size];
    r.largest_cluster_size = std::max(r.largest_cluster_size, size);
  }
  r.largest_fraction = static_cast<double>(r.largest_cluster_size) / static_cast<double>(r.p);
  return r;
}

double mse_empirical(const DataMatrix& S, const DataMatrix& approx) {
  if (S.p() != approx.p() || S.n() != approx.n()) throw std::invalid_argument("mse_empirical: shape mismatch");
  double acc = 0.0;
  auto a = S.values();
  auto b = approx.values();
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return acc / static_cast<double>(S.n());
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 matching points");
  const auto m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("loglog_slope: values must be positive");
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("loglog_slope: x values are all equal");
  return (m * sxy - sx * sy) / denom;
}

std::string to_json(const DistortionReport& report) {
  return nlohmann::json{{"eta", report.eta}, {"rd_db", report.rd_db}, {"n_pairs", report.n_pairs}}.dump();
}

std::string to_json(const PercolationReport& report) {
  nlohmann::json hist = nlohmann::json::array();
  for (auto [size, count] : report.size_histogram) hist.push_back({size, count});
  return nlohmann::json{{"p", report.p},
                        {"k", report.k},
                        {"largest_cluster_size", report.largest_cluster_size},
                        {"largest_fraction", report.largest_fraction},
                        {"size_histogram", hist}}
      .dump();
}

}  // namespace fgr
