#include "fgr/synthdata.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fgr/random.hpp"

namespace fgr {

namespace {

// Noise columns use a disjoint range of stream ids so that sharing one seed
// between field and noise never reuses a stream.
constexpr std::uint64_t kNoiseStreamBase = 1ULL << 63;

std::size_t reflect(std::ptrdiff_t i, std::size_t d) {
  const auto period = static_cast<std::ptrdiff_t>(2 * d);
  std::ptrdiff_t m = i % period;
  if (m < 0) m += period;
  return static_cast<std::size_t>(m < static_cast<std::ptrdiff_t>(d) ? m : period - 1 - m);
}

std::vector<double> gaussian_kernel(double sigma) {
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(4.0 * sigma));
  std::vector<double> w(2 * radius + 1);
  double total = 0.0;
  for (std::ptrdiff_t t = -radius; t <= radius; ++t) {
    double v = std::exp(-0.5 * static_cast<double>(t * t) / (sigma * sigma));
    w[t + radius] = v;
    total += v;
  }
  for (double& v : w) v /= total;
  return w;
}

void smooth_axis(std::vector<double>& field, std::span<const std::size_t> dims, std::size_t axis,
                 const std::vector<double>& kernel) {
  const auto radius = static_cast<std::ptrdiff_t>(kernel.size() / 2);
  std::size_t stride = 1;
  for (std::size_t a = axis + 1; a < dims.size(); ++a) stride *= dims[a];
  const std::size_t len = dims[axis];
  const std::size_t outer = field.size() / (len * stride);
  std::vector<double> line(len), out(len);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t inner = 0; inner < stride; ++inner) {
      const std::size_t base = o * len * stride + inner;
      for (std::size_t i = 0; i < len; ++i) line[i] = field[base + i * stride];
      for (std::size_t i = 0; i < len; ++i) {
        double acc = 0.0;
        for (std::ptrdiff_t t = -radius; t <= radius; ++t)
          acc += kernel[t + radius] * line[reflect(static_cast<std::ptrdiff_t>(i) + t, len)];
        out[i] = acc;
      }
      for (std::size_t i = 0; i < len; ++i) field[base + i * stride] = out[i];
    }
  }
}

void standardize(std::span<double> x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= static_cast<double>(x.size());
  const double inv = var > 0.0 ? 1.0 / std::sqrt(var) : 0.0;
  for (double& v : x) v = (v - mean) * inv;
}

}  // namespace

double fwhm_to_sigma(double fwhm) noexcept { return fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0))); }

DataMatrix smooth_random_field(std::span<const std::size_t> dims, double fwhm, std::size_t n, std::uint64_t seed) {
  if (dims.empty() || dims.size() > 3) throw std::invalid_argument("smooth_random_field: need 1 to 3 dimensions");
  if (!(fwhm >= 0.0) || !std::isfinite(fwhm)) throw std::invalid_argument("smooth_random_field: fwhm must be >= 0");
  std::size_t p = 1;
  for (auto d : dims) {
    if (d == 0) throw std::invalid_argument("smooth_random_field: zero-length dimension");
    p *= d;
  }
  const double sigma = fwhm_to_sigma(fwhm);
  const std::vector<double> kernel = sigma > 0.0 ? gaussian_kernel(sigma) : std::vector<double>{};

  DataMatrix out(p, n);
  std::vector<double> field(p);
  for (std::size_t s = 0; s < n; ++s) {
    auto rng = substream(seed, s);
    NormalSource normal(rng);
    for (double& v : field) v = normal();
    if (!kernel.empty())
      for (std::size_t a = 0; a < dims.size(); ++a) smooth_axis(field, dims, a, kernel);
    auto col = out.column(s);
    std::copy(field.begin(), field.end(), col.begin());
    standardize(col);
  }
  return out;
}

double overall_variance(std::span<const double> values) noexcept {
  if (values.empty()) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  return var / static_cast<double>(values.size());
}

NoisyData add_noise(const DataMatrix& S, double snr_db, std::uint64_t seed) {
  S.require_finite();
  if (std::isnan(snr_db)) throw std::invalid_argument("add_noise: snr_db is NaN");
  NoisyData out{S, NoiseModel{0.0, snr_db, seed}};
  if (snr_db >= kNoiselessSnrDb) return out;
  const double variance = overall_variance(S.values()) * std::pow(10.0, -snr_db / 10.0);
  out.noise.sigma = std::sqrt(variance);
  for (std::size_t s = 0; s < S.n(); ++s) {
    auto rng = substream(seed, kNoiseStreamBase + s);
    NormalSource normal(rng);
    for (double& v : out.noisy.column(s)) v += out.noise.sigma * normal();
  }
  return out;
}

double measured_snr(const DataMatrix& S, const DataMatrix& N) {
  if (S.p() != N.p() || S.n() != N.n()) throw std::invalid_argument("measured_snr: shape mismatch");
  const double noise_var = overall_variance(N.values());
  if (noise_var == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(overall_variance(S.values()) / noise_var);
}

SyntheticSet make_synthetic(std::span<const std::size_t> dims, double fwhm, std::size_t n, double snr_db,
                            std::uint64_t seed) {
  auto clean = smooth_random_field(dims, fwhm, n, seed);
  auto noisy = add_noise(clean, snr_db, seed);
  return SyntheticSet{std::move(clean), std::move(noisy.noisy), {dims.begin(), dims.end()}, fwhm, noisy.noise};
}

}  // namespace fgr
