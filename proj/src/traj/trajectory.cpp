#include "cellforge/traj/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cellforge::traj {

namespace {

class ConstantCurve final : public Curve {
 public:
  explicit ConstantCurve(std::vector<double> q) : q_(std::move(q)) {}
  std::size_t dims() const override { return q_.size(); }
  double duration() const override { return 0.0; }
  void sample(std::span<const double> ts, double* q, double* qd,
              double* qdd) const override {
    const std::size_t n = ts.size();
    for (std::size_t j = 0; j < q_.size(); ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        if (q) q[j * n + i] = q_[j];
        if (qd) qd[j * n + i] = 0.0;
        if (qdd) qdd[j * n + i] = 0.0;
      }
    }
  }

 private:
  std::vector<double> q_;
};

class OffsetCurve final : public Curve {
 public:
  OffsetCurve(std::shared_ptr<const Curve> base, std::vector<double> offsets)
      : base_(std::move(base)), offsets_(std::move(offsets)) {
    if (offsets_.size() != base_->dims())
      throw std::invalid_argument("offset dims mismatch");
  }
  std::size_t dims() const override { return base_->dims(); }
  double duration() const override { return base_->duration(); }
  void sample(std::span<const double> ts, double* q, double* qd,
              double* qdd) const override {
    base_->sample(ts, q, qd, qdd);
    if (!q) return;
    const std::size_t n = ts.size();
    for (std::size_t j = 0; j < offsets_.size(); ++j) {
      for (std::size_t i = 0; i < n; ++i) q[j * n + i] += offsets_[j];
    }
  }

 private:
  std::shared_ptr<const Curve> base_;
  std::vector<double> offsets_;
};

class ChainCurve final : public Curve {
 public:
  explicit ChainCurve(std::vector<Trajectory> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw std::invalid_argument("chain needs at least one part");
    starts_.resize(parts_.size());
    double t = 0.0;
    for (std::size_t k = 0; k < parts_.size(); ++k) {
      starts_[k] = t;
      t += parts_[k].duration();
    }
    total_ = t;
  }
  std::size_t dims() const override { return parts_.front().dims(); }
  double duration() const override { return total_; }
  void sample(std::span<const double> ts, double* q, double* qd,
              double* qdd) const override {
    const std::size_t n = ts.size();
    const std::size_t nd = dims();
    std::vector<double> local;
    std::vector<double> bq, bqd, bqdd;
    std::size_t i = 0;
    while (i < n) {
      // contiguous run of samples falling into the same part
      const std::size_t k = part_index(ts[i]);
      const double t0 = starts_[k];
      const double t1 = t0 + parts_[k].duration();
      std::size_t j = i;
      while (j < n && (j == i || part_index(ts[j]) == k)) {
        if (part_index(ts[j]) != k) break;
        ++j;
      }
      local.resize(j - i);
      for (std::size_t m = i; m < j; ++m)
        local[m - i] = std::min(std::max(ts[m] - t0, 0.0), t1 - t0);
      const std::size_t run = j - i;
      bq.resize(nd * run);
      bqd.resize(nd * run);
      bqdd.resize(nd * run);
      parts_[k].sample(local, bq.data(), bqd.data(), bqdd.data());
      for (std::size_t d = 0; d < nd; ++d) {
        for (std::size_t m = 0; m < run; ++m) {
          if (q) q[d * n + i + m] = bq[d * run + m];
          if (qd) qd[d * n + i + m] = bqd[d * run + m];
          if (qdd) qdd[d * n + i + m] = bqdd[d * run + m];
        }
      }
      i = j;
    }
  }

 private:
  std::size_t part_index(double t) const {
    // last part whose start is <= t; final instant maps to the last part
    std::size_t lo = 0;
    for (std::size_t k = parts_.size(); k-- > 0;) {
      if (t >= starts_[k] - 1e-15) {
        lo = k;
        break;
      }
    }
    return lo;
  }

  std::vector<Trajectory> parts_;
  std::vector<double> starts_;
  double total_ = 0.0;
};

}  // namespace

void Trajectory::sample_at(double t, std::vector<double>& q,
                           std::vector<double>& qd,
                           std::vector<double>& qdd) const {
  const std::size_t nd = dims();
  q.resize(nd);
  qd.resize(nd);
  qdd.resize(nd);
  const double ts[1] = {t};
  std::vector<double> bq(nd), bqd(nd), bqdd(nd);
  curve_->sample(std::span<const double>(ts, 1), bq.data(), bqd.data(), bqdd.data());
  q = bq;
  qd = bqd;
  qdd = bqdd;
}

Trajectory Trajectory::constant(std::vector<double> q) {
  return Trajectory(std::make_shared<ConstantCurve>(std::move(q)));
}

Trajectory Trajectory::offset_by(std::vector<double> offsets) const {
  return Trajectory(std::make_shared<OffsetCurve>(curve_, std::move(offsets)));
}

std::vector<double> sample_grid(double duration, double delta_s) {
  if (!(delta_s > 0.0)) throw std::invalid_argument("delta_s must be > 0");
  if (duration <= 0.0) return {0.0};
  const auto m = static_cast<std::size_t>(
      std::max(1.0, std::ceil(duration / delta_s - 1e-9)));
  std::vector<double> ts(m + 1);
  for (std::size_t k = 0; k <= m; ++k)
    ts[k] = duration * static_cast<double>(k) / static_cast<double>(m);
  return ts;
}

Trajectory chain_trajectories(std::vector<Trajectory> parts) {
  if (parts.size() == 1) return parts.front();
  return Trajectory(std::make_shared<ChainCurve>(std::move(parts)));
}

}  // namespace cellforge::traj
