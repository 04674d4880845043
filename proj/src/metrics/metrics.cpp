#include "cellforge/metrics/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace cellforge::metrics {

namespace {

// Kahan-compensated accumulator; estimator results must not depend on the
// order records arrive from parallel campaign runs.
class CompensatedSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

bool finite(double g) { return g < kInf && std::isfinite(g); }

}  // namespace

double optimality_score(const std::vector<SampleRecord>& records) {
  CompensatedSum sum;
  std::size_t n = 0;
  for (const auto& r : records) {
    if (!finite(r.g_star) || !finite(r.g_hat)) continue;
    if (!(r.g_star > 0.0))
      throw std::domain_error("optimality_score: g_star must be > 0");
    sum.add((r.g_hat - r.g_star) / r.g_star);
    ++n;
  }
  if (n == 0) throw std::domain_error("optimality_score: no eligible records");
  return sum.value() / static_cast<double>(n);
}

double time_gain_score(const std::vector<SampleRecord>& records) {
  CompensatedSum sum;
  std::size_t n = 0;
  for (const auto& r : records) {
    if (!finite(r.g_star) || !finite(r.g_hat)) continue;
    if (!(r.t_star > 0.0))
      throw std::domain_error("time_gain_score: t_star must be > 0");
    sum.add((r.t_star - r.t_hat) / r.t_star);
    ++n;
  }
  if (n == 0) throw std::domain_error("time_gain_score: no eligible records");
  return sum.value() / static_cast<double>(n);
}

double robustness_score(const std::vector<SampleRecord>& records) {
  std::size_t cond = 0, hit = 0;
  for (const auto& r : records) {
    if (!finite(r.g_star)) continue;
    ++cond;
    if (finite(r.g_hat)) ++hit;
  }
  if (cond == 0)
    throw std::domain_error("robustness_score: no record with finite g_star");
  return static_cast<double>(hit) / static_cast<double>(cond);
}

double consistency_score(const std::vector<RepeatRecord>& repeats)
{
  CompensatedSum total;
  std::size_t kept = 0;
  for (const auto& rec : repeats) {
    std::vector<double> vals;
    for (double g : rec.outputs) {
      if (finite(g)) vals.push_back(g);
    }
    if (vals.size() < 2) continue;
    CompensatedSum m;
    for (double v : vals) m.add(v);
    const double mean = m.value() / static_cast<double>(vals.size());
    CompensatedSum var;
    for (double v : vals) var.add((v - mean) * (v - mean));
    const double variance = var.value() / static_cast<double>(vals.size());
    // zero-variance limit: all-zero outputs define a score of 0
    total.add(mean == 0.0 ? 0.0 : variance / mean);
    ++kept;
  }
  if (kept == 0) throw std::domain_error("consistency_score: no usable records");
  return total.value() / static_cast<double>(kept);
}

MetricsReport summarize(const std::vector<SampleRecord>& records,
                        const std::vector<RepeatRecord>* repeats) {
  MetricsReport rep;
  rep.n_samples = records.size();
  for (const auto& r : records) {
    if (finite(r.g_star)) ++rep.n_conditioning;
  }
  try {
    rep.optimality = optimality_score(records);
  } catch (const std::domain_error&) {
  }
  try {
    rep.time_gain = time_gain_score(records);
  } catch (const std::domain_error&) {
  }
  try {
    rep.robustness = robustness_score(records);
  } catch (const std::domain_error&) {
  }
  if (repeats) {
    try {
      rep.consistency = consistency_score(*repeats);
    } catch (const std::domain_error&) {
    }
  }
  return rep;
}

}  // namespace cellforge::metrics
