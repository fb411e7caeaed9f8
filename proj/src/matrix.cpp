#include "fgr/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fgr {

DataMatrix::DataMatrix(std::size_t p, std::size_t n) : p_(p), n_(n), values_(p * n, 0.0) {
  if (p == 0 || n == 0) throw std::invalid_argument("DataMatrix: p and n must be >= 1");
}

DataMatrix::DataMatrix(std::size_t p, std::size_t n, std::vector<double> values)
    : p_(p), n_(n), values_(std::move(values)) {
  if (p == 0 || n == 0) throw std::invalid_argument("DataMatrix: p and n must be >= 1");
  if (values_.size() != p * n) {
    throw std::invalid_argument("DataMatrix: expected " + std::to_string(p * n) + " values, got " +
                                std::to_string(values_.size()));
  }
}

DataMatrix DataMatrix::select_columns(std::span<const std::size_t> samples) const {
  if (samples.empty()) throw std::invalid_argument("select_columns: no columns requested");
  DataMatrix out(p_, samples.size());
  for (std::size_t c = 0; c < samples.size(); ++c) {
    if (samples[c] >= n_) throw std::invalid_argument("select_columns: column out of range");
    auto src = column(samples[c]);
    std::copy(src.begin(), src.end(), out.column(c).begin());
  }
  return out;
}

std::vector<double> DataMatrix::to_row_major() const {
  std::vector<double> rows(values_.size());
  for (std::size_t s = 0; s < n_; ++s)
    for (std::size_t i = 0; i < p_; ++i) rows[i * n_ + s] = values_[s * p_ + i];
  return rows;
}

DataMatrix DataMatrix::from_row_major(std::size_t p, std::size_t n, std::span<const double> rows) {
  if (rows.size() != p * n) throw std::invalid_argument("from_row_major: size mismatch");
  DataMatrix out(p, n);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t s = 0; s < n; ++s) out(i, s) = rows[i * n + s];
  return out;
}

void DataMatrix::require_finite() const { fgr::require_finite(values_, "DataMatrix"); }

void require_finite(std::span<const double> x, const char* what) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) {
      throw std::invalid_argument(std::string(what) + ": non-finite entry at index " +
                                  std::to_string(i));
    }
  }
}

double squared_norm(std::span<const double> x) noexcept {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace fgr
