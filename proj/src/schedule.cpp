#include "swim/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <utility>

#include "swim/errors.hpp"
#include "swim/quadrature.hpp"

namespace swim {

std::vector<double> ControlSchedule::breakpoints() const { return {0.0, duration()}; }

void PiecewiseConstantSchedule::append(double length, const VecX& lambda) {
  if (length <= 0.0) throw ConfigError("control segment length must be positive");
  if (lambda.size() != n_) throw ConfigError("control segment has wrong channel count");
  const double start = duration();
  segments_.push_back({start, start + length, lambda});
}

double PiecewiseConstantSchedule::duration() const {
  return segments_.empty() ? 0.0 : segments_.back().t_end;
}

VecX PiecewiseConstantSchedule::value(double t) const {
  if (segments_.empty()) return VecX::Zero(n_);
  // Right-continuous: the segment whose [t_start, t_end) contains t; the
  // final instant belongs to the last segment.
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](double v, const Segment& seg) { return v < seg.t_end; });
  if (it == segments_.end()) return segments_.back().lambda;
  return it->lambda;
}

std::vector<double> PiecewiseConstantSchedule::breakpoints() const {
  std::vector<double> out = {0.0};
  for (const Segment& seg : segments_) out.push_back(seg.t_end);
  return out;
}

VecX SineSchedule::value(double t) const {
  VecX out(n());
  for (int i = 0; i < n(); ++i) {
    const Channel& ch = channels_[i];
    out[i] = ch.offset +
             ch.amplitude * std::sin(2.0 * std::numbers::pi * ch.frequency * t + ch.phase);
  }
  return out;
}

namespace {

// exp(-1/(1-u^2)) on (-1,1), normalized to unit mass.
double bump_normalization() {
  static const double norm = adaptive_integrate(
      [](double u) { return std::exp(-1.0 / (1.0 - u * u)); }, -1.0, 1.0, 1e-14);
  return norm;
}

double bump_kernel(double u) {
  if (std::abs(u) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - u * u)) / bump_normalization();
}

}  // namespace

MollifiedSchedule::MollifiedSchedule(SchedulePtr base, double width)
    : base_(std::move(base)), width_(width) {
  if (width_ <= 0.0) throw ConfigError("mollification width must be positive");
  base_breaks_ = base_->breakpoints();
  std::sort(base_breaks_.begin(), base_breaks_.end());
}

VecX MollifiedSchedule::value(double t) const {
  // Integrate base(tau) k_w(t - tau) over [t-w, t+w], splitting at the base
  // breakpoints; 16-point Gauss per smooth piece.
  static const auto gl = [] {
    std::pair<std::vector<double>, std::vector<double>> rule;
    gauss_legendre(16, rule.first, rule.second);
    return rule;
  }();
  const auto& [nodes, weights] = gl;

  std::set<double> cuts = {t - width_, t + width_};
  for (double b : base_breaks_)
    if (b > t - width_ && b < t + width_) cuts.insert(b);

  const double t_max = base_->duration();
  VecX acc = VecX::Zero(base_->n());
  double mass = 0.0;  // kernel mass under the same rule, for normalization
  double prev = 0.0;
  bool first = true;
  for (double cut : cuts) {
    if (!first) {
      const double mid = 0.5 * (prev + cut), half = 0.5 * (cut - prev);
      for (size_t k = 0; k < nodes.size(); ++k) {
        const double tau = mid + half * nodes[k];
        const double clamped = std::clamp(tau, 0.0, t_max);
        const double w = half * weights[k] * bump_kernel((t - tau) / width_) / width_;
        acc += w * base_->value(clamped);
        mass += w;
      }
    }
    prev = cut;
    first = false;
  }
  // Normalizing by the discretely integrated kernel mass makes the result an
  // exact convex combination of base values: constants are reproduced
  // exactly and the small-width limit recovers the base schedule.
  return acc / mass;
}

SchedulePtr smooth_controls(SchedulePtr schedule, double width) {
  return std::make_shared<MollifiedSchedule>(std::move(schedule), width);
}

double schedule_l1_distance(const ControlSchedule& a, const ControlSchedule& b,
                            int points_per_piece) {
  if (a.n() != b.n()) throw ConfigError("schedules have different channel counts");
  std::vector<double> nodes, weights;
  gauss_legendre(points_per_piece, nodes, weights);

  std::set<double> cuts;
  for (double t : a.breakpoints()) cuts.insert(t);
  for (double t : b.breakpoints()) cuts.insert(t);
  cuts.insert(0.0);
  cuts.insert(std::max(a.duration(), b.duration()));

  double dist = 0.0;
  double prev = 0.0;
  bool first = true;
  for (double cut : cuts) {
    if (!first && cut > prev) {
      const double mid = 0.5 * (prev + cut), half = 0.5 * (cut - prev);
      for (size_t k = 0; k < nodes.size(); ++k) {
        const double t = mid + half * nodes[k];
        dist += half * weights[k] * (a.value(t) - b.value(t)).lpNorm<1>();
      }
    }
    prev = cut;
    first = false;
  }
  return dist;
}

}  // namespace swim
