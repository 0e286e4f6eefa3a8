#pragma once

#include <cmath>
#include <span>

namespace sponge {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  CompensatedSum& operator+=(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// 0 log 0 = 0
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

/// Shannon entropy in nats of a (sub)probability vector.
inline double shannon_entropy(std::span<const double> probs) {
  CompensatedSum s;
  for (double p : probs) s += -xlogx(p);
  return s.value();
}

}  // namespace sponge
