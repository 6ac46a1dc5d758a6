#pragma once

#include <cstddef>
#include <optional>

#include "helssvr/types.hpp"

namespace helssvr {

/// Regression error summary for targets y and predictions f.
///
/// error_pos averages |y - f| over the under-predicted group {y >= f},
/// error_neg over the over-predicted group {y < f}; each is normalized by its
/// own group size and is absent when the group is empty.
struct MetricsReport {
  double rmse = 0.0;
  double mae = 0.0;
  std::optional<double> error_pos;
  std::optional<double> error_neg;
  std::size_t n = 0;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
};

/// Throws ShapeError on a length mismatch and DomainError for empty input.
MetricsReport compute_metrics(const Vector& y, const Vector& f);

}  // namespace helssvr
