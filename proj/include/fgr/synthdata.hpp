#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fgr/matrix.hpp"

namespace fgr {

struct NoiseModel {
  double sigma = 0.0;   // noise standard deviation
  double snr_db = 0.0;  // requested 10 log10(Var(S) / sigma^2)
  std::uint64_t seed = 0;
};

struct SyntheticSet {
  DataMatrix clean;  // S
  DataMatrix noisy;  // X = S + N
  std::vector<std::size_t> dims;
  double fwhm = 0.0;
  NoiseModel noise;
};

/// Requests at or above this SNR are treated as noiseless.
inline constexpr double kNoiselessSnrDb = 300.0;

/// Gaussian kernel standard deviation for a full width at half maximum.
double fwhm_to_sigma(double fwhm) noexcept;

/// n independent samples of white Gaussian noise on the lattice, each
/// smoothed by a separable Gaussian kernel (truncated at 4 sigma, half-sample
/// reflective boundary) and standardized to zero mean and unit variance.
/// Sample s is drawn from substream (seed, s), so columns do not depend on n.
DataMatrix smooth_random_field(std::span<const std::size_t> dims, double fwhm, std::size_t n, std::uint64_t seed);

struct NoisyData {
  DataMatrix noisy;
  NoiseModel noise;
};

/// Adds i.i.d. N(0, sigma^2) noise with sigma^2 = Var(S) 10^(-snr_db/10),
/// the variance taken over all entries of S. snr_db >= 300 returns an exact
/// copy with sigma = 0.
NoisyData add_noise(const DataMatrix& S, double snr_db, std::uint64_t seed);

/// 10 log10(Var(S) / Var(N)); +inf when N has zero variance.
double measured_snr(const DataMatrix& S, const DataMatrix& N);

/// Population variance over all entries.
double overall_variance(std::span<const double> values) noexcept;

SyntheticSet make_synthetic(std::span<const std::size_t> dims, double fwhm, std::size_t n, double snr_db,
                            std::uint64_t seed);

}  // namespace fgr
