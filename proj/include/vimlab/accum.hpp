#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace vimlab {

/// Neumaier-compensated running sum; cheap insurance-free accumulation for
/// long Monte-Carlo reductions where plain doubles would drift.
class CompensatedSum {
 public:
  void add(double v) {
    double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Streaming mean and (sample) variance, Welford's update.
class RunningMoments {
 public:
  void add(double v) {
    ++n_;
    double d = v - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (v - mean_);
  }
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double sample_variance() const {
    return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
  }
  double sample_sd() const { return std::sqrt(sample_variance()); }
  /// Standard error of the mean.
  double se() const {
    return n_ > 1 ? sample_sd() / std::sqrt(static_cast<double>(n_)) : 0.0;
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

inline double mean_of(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("mean_of: empty range");
  CompensatedSum s;
  for (double x : v) s.add(x);
  return s.value() / static_cast<double>(v.size());
}

inline double sample_sd_of(std::span<const double> v) {
  RunningMoments m;
  for (double x : v) m.add(x);
  return m.sample_sd();
}

}  // namespace vimlab
