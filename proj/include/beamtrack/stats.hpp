#pragma once

// Compensated accumulation and small statistical helpers.

#include <cstdint>
#include <span>

namespace beamtrack {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) noexcept;
  void merge(const CompensatedSum& o) noexcept {
    add(o.sum_);
    add(o.comp_);
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Mean and standard error of a sample, merged in a caller-defined order.
class MeanAccumulator {
 public:
  void add(double v) noexcept {
    ++n_;
    s_.add(v);
    s2_.add(v * v);
  }
  void merge(const MeanAccumulator& o) noexcept {
    n_ += o.n_;
    s_.merge(o.s_);
    s2_.merge(o.s2_);
  }
  std::int64_t count() const noexcept { return n_; }
  double mean() const noexcept;
  double variance() const noexcept;  // unbiased
  double stderr_of_mean() const noexcept;

 private:
  std::int64_t n_ = 0;
  CompensatedSum s_;
  CompensatedSum s2_;
};

double sample_mean(std::span<const double> v);
double sample_variance(std::span<const double> v);

/// Anderson-Darling statistic against a normal law with estimated mean and
/// variance, with the small-sample correction (1 + 0.75/n + 2.25/n^2).
double anderson_darling_normal(std::span<const double> v);

/// Critical value of the corrected statistic at the 5% level.
inline constexpr double kAndersonDarling5pct = 0.752;

}  // namespace beamtrack
