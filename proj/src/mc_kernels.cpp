#include "mixne/mc_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mixne/rng.hpp"

namespace mixne {

namespace {

struct ChunkStats {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
};

void check_inputs(double theta1, double omega1, std::size_t n_samples) {
  if (std::abs(theta1 * omega1 - 0.5) > 1e-12) {
    throw std::invalid_argument("initial point must lie on theta * omega = 0.5");
  }
  if (n_samples == 0) throw std::invalid_argument("n_samples must be positive");
}

ChunkStats run_chunk(double theta1, double omega1, double eta, std::size_t count,
                     std::uint64_t seed) {
  Rng rng(seed);
  const double s = std::sqrt(2.0 * eta);
  ChunkStats st;
  for (std::size_t i = 0; i < count; ++i) {
    const double xi = rng.normal();
    const double xi1 = rng.normal();
    const double xi2 = rng.normal();
    const double xi3 = rng.normal();
    const double t2 = theta1 + s * xi;
    const double w2 = omega1 + s * xi1;
    const double t3 = t2 + eta * (2.0 * t2 * w2 * w2 - w2) + s * xi2;
    const double w3 = w2 - eta * (2.0 * t2 * t2 * w2 - t2) + s * xi3;
    const double x = t3 * w3;
    ++st.count;
    const double delta = x - st.mean;
    st.mean += delta / static_cast<double>(st.count);
    st.m2 += delta * (x - st.mean);
  }
  return st;
}

std::size_t chunk_count(std::size_t n) { return (n + kMonteCarloChunk - 1) / kMonteCarloChunk; }

std::size_t chunk_size(std::size_t n, std::size_t c) {
  const std::size_t begin = c * kMonteCarloChunk;
  return std::min(kMonteCarloChunk, n - begin);
}

MonteCarloEstimate merge(const std::vector<ChunkStats>& chunks) {
  ChunkStats total;
  for (const auto& c : chunks) {
    const auto n = static_cast<double>(total.count + c.count);
    const double delta = c.mean - total.mean;
    total.mean += delta * static_cast<double>(c.count) / n;
    total.m2 += c.m2 + delta * delta * static_cast<double>(total.count) *
                           static_cast<double>(c.count) / n;
    total.count += c.count;
  }
  MonteCarloEstimate est;
  est.mean = total.mean;
  est.samples = total.count;
  if (total.count > 1) {
    const double var = total.m2 / static_cast<double>(total.count - 1);
    est.std_error = std::sqrt(var / static_cast<double>(total.count));
  }
  return est;
}

}  // namespace

MonteCarloEstimate mc_two_step_product(double theta1, double omega1, double eta,
                                       std::size_t n_samples, std::uint64_t rng_seed) {
  check_inputs(theta1, omega1, n_samples);
  const std::size_t chunks = chunk_count(n_samples);
  std::vector<ChunkStats> stats(chunks);
  const auto nc = static_cast<std::ptrdiff_t>(chunks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < nc; ++c) {
    const auto cu = static_cast<std::size_t>(c);
    stats[cu] = run_chunk(theta1, omega1, eta, chunk_size(n_samples, cu), derive_seed(rng_seed, cu));
  }
  return merge(stats);
}

MonteCarloEstimate mc_two_step_product_serial(double theta1, double omega1, double eta,
                                              std::size_t n_samples, std::uint64_t rng_seed) {
  check_inputs(theta1, omega1, n_samples);
  std::vector<ChunkStats> stats;
  for (std::size_t c = 0; c < chunk_count(n_samples); ++c) {
    stats.push_back(run_chunk(theta1, omega1, eta, chunk_size(n_samples, c), derive_seed(rng_seed, c)));
  }
  return merge(stats);
}

}  // namespace mixne
