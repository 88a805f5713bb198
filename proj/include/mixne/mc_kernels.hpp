#pragma once

// Monte-Carlo estimate of E[theta_3 * omega_3] for the two-step unprojected,
// undamped, unit-temperature Langevin process on TrapA:
//
//   theta_2 = theta_1 + sqrt(2 eta) xi
//   omega_2 = omega_1 + sqrt(2 eta) xi'
//   theta_3 = theta_2 + eta (2 theta_2 omega_2^2 - omega_2) + sqrt(2 eta) xi''
//   omega_3 = omega_2 - eta (2 theta_2^2 omega_2 - theta_2) + sqrt(2 eta) xi'''
//
// Samples are split into fixed-size chunks, each driven by its own generator
// seeded from (rng_seed, chunk index), and chunk statistics are merged in
// chunk order. The OpenMP kernel and the serial reference therefore return
// bit-identical results for any thread count.

#include <cstddef>
#include <cstdint>

namespace mixne {

inline constexpr std::size_t kMonteCarloChunk = std::size_t{1} << 15;

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Throws std::invalid_argument off the curve theta_1 omega_1 = 1/2 or when
/// n_samples is zero.
MonteCarloEstimate mc_two_step_product(double theta1, double omega1, double eta,
                                       std::size_t n_samples, std::uint64_t rng_seed);

MonteCarloEstimate mc_two_step_product_serial(double theta1, double omega1, double eta,
                                              std::size_t n_samples, std::uint64_t rng_seed);

}  // namespace mixne
