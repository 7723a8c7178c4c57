#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace simplexkern {

// Deterministic seeded stream: identical seed, identical draw sequence.
// Substreams derive reproducibly from (seed, index) for sharded Monte Carlo.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::mt19937_64& engine() { return engine_; }

  RngStream substream(std::uint64_t index) const {
    std::seed_seq seq{seed_, index + 1};
    std::uint64_t derived[2];
    seq.generate(derived, derived + 2);
    return RngStream(derived[0] ^ (derived[1] << 1));
  }

  double uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }

  double gamma(double shape, double scale = 1.0) {
    return std::gamma_distribution<double>(shape, scale)(engine_);
  }

  double beta(double a, double b) {
    double x = gamma(a);
    double y = gamma(b);
    return x / (x + y);
  }

  int binomial(int n, double p) {
    if (n <= 0) return 0;
    return std::binomial_distribution<int>(n, p)(engine_);
  }

  bool rademacher() { return std::bernoulli_distribution(0.5)(engine_); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// Streaming mean/variance accumulator (Welford) with deterministic merge.
class RunningStat {
 public:
  void add(double x) {
    ++n_;
    double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }

  void merge(const RunningStat& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
      *this = o;
      return;
    }
    double delta = o.mean_ - mean_;
    std::uint64_t n = n_ + o.n_;
    m2_ += o.m2_ + delta * delta * static_cast<double>(n_) * static_cast<double>(o.n_) /
                       static_cast<double>(n);
    mean_ += delta * static_cast<double>(o.n_) / static_cast<double>(n);
    n_ = n;
  }

  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double std_error() const {
    return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
  }
  double z_score(double target) const {
    double se = std_error();
    double diff = mean() - target;
    if (se == 0.0) return diff == 0.0 ? 0.0 : (diff > 0 ? 1e30 : -1e30);
    return diff / se;
  }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace simplexkern
