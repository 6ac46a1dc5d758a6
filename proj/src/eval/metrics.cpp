#include "helssvr/eval/metrics.hpp"

#include <cmath>

#include "helssvr/errors.hpp"

namespace helssvr {

MetricsReport compute_metrics(const Vector& y, const Vector& f) {
  if (y.size() != f.size()) throw ShapeError("compute_metrics: y and f differ in length");
  if (y.size() == 0) throw DomainError("compute_metrics: empty input");

  MetricsReport r;
  r.n = static_cast<std::size_t>(y.size());
  double sq = 0.0, abs_sum = 0.0, pos = 0.0, neg = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double e = y(i) - f(i);
    const double a = std::abs(e);
    sq += e * e;
    abs_sum += a;
    if (y(i) >= f(i)) {
      pos += a;
      ++r.n_pos;
    } else {
      neg += a;
      ++r.n_neg;
    }
  }
  const auto n = static_cast<double>(r.n);
  r.rmse = std::sqrt(sq / n);
  r.mae = abs_sum / n;
  if (r.n_pos > 0) r.error_pos = pos / static_cast<double>(r.n_pos);
  if (r.n_neg > 0) r.error_neg = neg / static_cast<double>(r.n_neg);
  return r;
}

}  // namespace helssvr
