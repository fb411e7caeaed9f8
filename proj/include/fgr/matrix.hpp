#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fgr {

/// Dense p x n matrix of features by samples. Storage is column-major so
/// that one sample (a signal in R^p) is a contiguous slab.
class DataMatrix {
 public:
  DataMatrix() = default;
  DataMatrix(std::size_t p, std::size_t n);
  DataMatrix(std::size_t p, std::size_t n, std::vector<double> values);

  std::size_t p() const noexcept { return p_; }
  std::size_t n() const noexcept { return n_; }
  bool empty() const noexcept { return values_.empty(); }

  double& operator()(std::size_t feature, std::size_t sample) noexcept {
    return values_[sample * p_ + feature];
  }
  double operator()(std::size_t feature, std::size_t sample) const noexcept {
    return values_[sample * p_ + feature];
  }

  std::span<double> column(std::size_t sample) noexcept {
    return {values_.data() + sample * p_, p_};
  }
  std::span<const double> column(std::size_t sample) const noexcept {
    return {values_.data() + sample * p_, p_};
  }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  /// Copy of the given columns, in the given order.
  DataMatrix select_columns(std::span<const std::size_t> samples) const;

  /// Feature-major copy: entry (i, s) at i * n + s.
  std::vector<double> to_row_major() const;
  static DataMatrix from_row_major(std::size_t p, std::size_t n, std::span<const double> rows);

  /// Throws std::invalid_argument if any entry is NaN or infinite.
  void require_finite() const;

  friend bool operator==(const DataMatrix&, const DataMatrix&) = default;

 private:
  std::size_t p_ = 0;
  std::size_t n_ = 0;
  std::vector<double> values_;
};

/// Throws std::invalid_argument naming `what` if `x` has a non-finite entry.
void require_finite(std::span<const double> x, const char* what);

double squared_norm(std::span<const double> x) noexcept;
double dot(std::span<const double> a, std::span<const double> b) noexcept;

}  // namespace fgr
