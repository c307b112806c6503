#include "beamtrack/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace beamtrack {

void CompensatedSum::add(double v) noexcept {
  const double t = sum_ + v;
  if (std::abs(sum_) >= std::abs(v))
    comp_ += (sum_ - t) + v;
  else
    comp_ += (v - t) + sum_;
  sum_ = t;
}

double MeanAccumulator::mean() const noexcept {
  return n_ > 0 ? s_.value() / static_cast<double>(n_) : std::nan("");
}

double MeanAccumulator::variance() const noexcept {
  if (n_ < 2) return 0.0;
  const double n = static_cast<double>(n_);
  const double m = s_.value() / n;
  return std::max(0.0, (s2_.value() - n * m * m) / (n - 1.0));
}

double MeanAccumulator::stderr_of_mean() const noexcept {
  if (n_ < 2) return 0.0;
  return std::sqrt(variance() / static_cast<double>(n_));
}

double sample_mean(std::span<const double> v) {
  if (v.empty()) return std::nan("");
  CompensatedSum s;
  for (double x : v) s.add(x);
  return s.value() / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = sample_mean(v);
  CompensatedSum s;
  for (double x : v) s.add((x - m) * (x - m));
  return s.value() / static_cast<double>(v.size() - 1);
}

double anderson_darling_normal(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n < 8) throw std::invalid_argument("Anderson-Darling needs at least 8 samples");
  const double m = sample_mean(v);
  const double s = std::sqrt(sample_variance(v));
  if (!(s > 0.0)) throw std::invalid_argument("Anderson-Darling needs a non-degenerate sample");
  std::vector<double> z(v.begin(), v.end());
  std::sort(z.begin(), z.end());
  // log Phi and log(1 - Phi) through erfc keep the tails accurate.
  auto log_cdf = [](double t) { return std::log(0.5 * std::erfc(-t / std::sqrt(2.0))); };
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = log_cdf((z[i] - m) / s);
    const double hi = log_cdf(-(z[n - 1 - i] - m) / s);
    acc += (2.0 * static_cast<double>(i) + 1.0) * (lo + hi);
  }
  const double nn = static_cast<double>(n);
  const double a2 = -nn - acc / nn;
  return a2 * (1.0 + 0.75 / nn + 2.25 / (nn * nn));
}

}  // namespace beamtrack
