#pragma once

#include <cstdint>
#include <span>

namespace ymlab {

/// Sets the OpenMP team size used by the stencil kernels. Results never depend
/// on this value: reductions go through pairwise_sum, which fixes the
/// summation tree by index alone.
void set_threads(int n);
int threads();

/// Pairwise (tree) summation with a fixed leaf size.
double pairwise_sum(std::span<const double> values);

/// Counter-based random stream. A master seed plus a stream label yield an
/// independent generator; draws are a pure function of (seed, stream, counter).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  double uniform();   // [0, 1)
  double normal();    // standard normal via Box-Muller

  static std::uint64_t mix(std::uint64_t x);
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ymlab
