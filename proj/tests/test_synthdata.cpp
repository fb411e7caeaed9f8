#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "fgr/graph.hpp"
#include "fgr/grouping.hpp"
#include "fgr/synthdata.hpp"

using namespace fgr;
using doctest::Approx;

namespace {

const std::array<std::size_t, 3> kCube{20, 20, 20};

// Mean product over lattice edges; samples are standardized, so this is the
// lag-1 autocorrelation.
double lag1_autocorrelation(const DataMatrix& X, const StructureGraph& g) {
  double acc = 0.0;
  for (std::size_t s = 0; s < X.n(); ++s) {
    auto x = X.column(s);
    double sum = 0.0;
    for (const Edge& e : g.edges()) sum += x[e.u] * x[e.v];
    acc += sum / static_cast<double>(g.edge_count());
  }
  return acc / static_cast<double>(X.n());
}

DataMatrix difference(const DataMatrix& a, const DataMatrix& b) {
  DataMatrix out(a.p(), a.n());
  for (std::size_t s = 0; s < a.n(); ++s)
    for (std::size_t i = 0; i < a.p(); ++i) out(i, s) = a(i, s) - b(i, s);
  return out;
}

}  // namespace

TEST_CASE("fwhm conversion") {
  CHECK(fwhm_to_sigma(8.0) == Approx(3.39729).epsilon(1e-5));
  CHECK(fwhm_to_sigma(0.0) == 0.0);
  CHECK(fwhm_to_sigma(2.0 * std::sqrt(2.0 * std::log(2.0))) == Approx(1.0));
}

TEST_CASE("fields are standardized per sample") {
  for (double fwhm : {0.0, 3.0, 8.0}) {
    auto X = smooth_random_field(kCube, fwhm, 5, 11);
    CHECK(X.p() == 8000);
    CHECK(X.n() == 5);
    for (std::size_t s = 0; s < X.n(); ++s) {
      auto x = X.column(s);
      double mean = 0.0;
      for (double v : x) mean += v;
      mean /= static_cast<double>(x.size());
      CHECK(std::abs(mean) <= 1e-12);
      CHECK(overall_variance(x) == Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("white noise is uncorrelated and smoothing increases autocorrelation") {
  auto g = build_lattice_graph(kCube);
  double previous = -1.0;
  for (double fwhm : {0.0, 2.0, 4.0, 8.0}) {
    double rho = lag1_autocorrelation(smooth_random_field(kCube, fwhm, 50, 2024), g);
    if (fwhm == 0.0) CHECK(std::abs(rho) < 0.01);
    CHECK(rho > previous);
    previous = rho;
  }
  CHECK(previous > 0.9);
}

TEST_CASE("smooth fields have smaller edge Lipschitz constants") {
  auto g = build_lattice_graph(kCube);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto white = smooth_random_field(kCube, 0.0, 1, seed);
    auto smooth = smooth_random_field(kCube, 8.0, 1, seed);
    CHECK(smoothness_constant(smooth.column(0), g).global < smoothness_constant(white.column(0), g).global);
  }
}

TEST_CASE("generation is deterministic and column-stable") {
  std::array<std::size_t, 2> dims{9, 13};
  auto a = smooth_random_field(dims, 4.0, 6, 77);
  CHECK(a == smooth_random_field(dims, 4.0, 6, 77));
  CHECK(!(a == smooth_random_field(dims, 4.0, 6, 78)));
  auto prefix = smooth_random_field(dims, 4.0, 3, 77);
  for (std::size_t s = 0; s < 3; ++s)
    for (std::size_t i = 0; i < a.p(); ++i) CHECK(prefix(i, s) == a(i, s));
  std::array<std::size_t, 2> bad{0, 3};
  CHECK_THROWS_AS(smooth_random_field(bad, 4.0, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(smooth_random_field(dims, -1.0, 2, 1), std::invalid_argument);
}

TEST_CASE("noise level follows the requested SNR") {
  auto S = smooth_random_field(kCube, 8.0, 20, 3);
  auto noisy = add_noise(S, 2.06, 4);
  CHECK(noisy.noise.sigma * noisy.noise.sigma == Approx(std::pow(10.0, -0.206)).epsilon(1e-12));
  CHECK(noisy.noise.sigma * noisy.noise.sigma == Approx(0.6223).epsilon(1e-4));
  CHECK(std::abs(measured_snr(S, difference(noisy.noisy, S)) - 2.06) <= 0.1);

  auto clean = add_noise(S, kNoiselessSnrDb, 4);
  CHECK(clean.noisy == S);
  CHECK(clean.noise.sigma == 0.0);
  CHECK(add_noise(S, 2.06, 4).noisy == noisy.noisy);
}

TEST_CASE("measured snr") {
  DataMatrix S(4, 1), N(4, 1);
  double s[] = {1, -1, 1, -1}, n[] = {-1, 1, 1, -1};
  for (std::size_t i = 0; i < 4; ++i) S(i, 0) = s[i], N(i, 0) = n[i];
  CHECK(measured_snr(S, N) == Approx(0.0));
  CHECK(std::isinf(measured_snr(S, DataMatrix(4, 1))));
  CHECK_THROWS_AS(measured_snr(S, DataMatrix(3, 1)), std::invalid_argument);
}

TEST_CASE("synthetic set") {
  std::array<std::size_t, 3> dims{6, 6, 6};
  auto set = make_synthetic(dims, 4.0, 8, 2.06, 5);
  CHECK(set.clean.p() == 216);
  CHECK(set.noisy.n() == 8);
  CHECK(set.dims == std::vector<std::size_t>{6, 6, 6});
  CHECK(set.noise.snr_db == 2.06);
  CHECK(set.noise.sigma > 0.0);
  CHECK(!(set.clean == set.noisy));
}
