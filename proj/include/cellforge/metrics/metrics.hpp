#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cellforge/common.hpp"

namespace cellforge::metrics {

// One (x, theta) sample: reference cost/time and a variant's cost/time.
// Infinite costs mark runs that found no solution.
struct SampleRecord {
  std::size_t sample_id = 0;
  std::string x_ref;            // composition id
  std::uint64_t theta_ref = 0;  // scenario seed
  double g_star = kInf;
  double t_star = 0.0;
  double g_hat = kInf;
  double t_hat = 0.0;
};

// Repeated runs of one variant on one sample with fresh seeds.
struct RepeatRecord {
  std::size_t sample_id = 0;
  std::vector<double> outputs;
};

struct MetricsReport {
  std::optional<double> optimality;
  std::optional<double> time_gain;
  std::optional<double> robustness;
  std::optional<double> consistency;
  std::size_t n_samples = 0;
  std::size_t n_conditioning = 0;  // records with finite g_star
};

// Mean of (g_hat - g_star)/g_star over records where both costs are finite.
// Throws std::domain_error when no record qualifies.
double optimality_score(const std::vector<SampleRecord>& records);

// Mean of (t_star - t_hat)/t_star over the same conditioning as optimality.
double time_gain_score(const std::vector<SampleRecord>& records);

// P(g_hat finite | g_star finite).
double robustness_score(const std::vector<SampleRecord>& records);

// Per record: population variance of the finite outputs divided by their
// mean (0 when the mean is 0); records with fewer than two finite outputs are
// dropped. Returns the mean over the kept records.
double consistency_score(const std::vector<RepeatRecord>& repeats);

MetricsReport summarize(const std::vector<SampleRecord>& records,
                        const std::vector<RepeatRecord>* repeats = nullptr);

}  // namespace cellforge::metrics
