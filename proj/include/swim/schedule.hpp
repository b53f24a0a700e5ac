#pragma once

#include <memory>
#include <vector>

#include "swim/types.hpp"

namespace swim {

// Shape controls lambda(t) on [0, duration]: the rates sdot_i = lambda_i(t).
class ControlSchedule {
 public:
  virtual ~ControlSchedule() = default;
  virtual int n() const = 0;
  virtual double duration() const = 0;
  virtual VecX value(double t) const = 0;
  // Times where the controls may jump (always includes 0 and duration);
  // integrators split steps here so discontinuities never sit inside a step.
  virtual std::vector<double> breakpoints() const;
};

using SchedulePtr = std::shared_ptr<const ControlSchedule>;

// Piecewise-constant controls, right-continuous at segment starts.
class PiecewiseConstantSchedule final : public ControlSchedule {
 public:
  struct Segment {
    double t_start;
    double t_end;
    VecX lambda;
  };

  explicit PiecewiseConstantSchedule(int n) : n_(n) {}
  // Appends a segment of the given length (end of schedule so far onward).
  void append(double length, const VecX& lambda);
  const std::vector<Segment>& segments() const { return segments_; }

  int n() const override { return n_; }
  double duration() const override;
  VecX value(double t) const override;
  std::vector<double> breakpoints() const override;

 private:
  int n_;
  std::vector<Segment> segments_;
};

// Sinusoidal controls lambda_i = offset + amplitude sin(2 pi freq t + phase).
class SineSchedule final : public ControlSchedule {
 public:
  struct Channel {
    double amplitude = 0.0;
    double frequency = 0.0;
    double phase = 0.0;
    double offset = 0.0;
  };

  SineSchedule(std::vector<Channel> channels, double duration)
      : channels_(std::move(channels)), duration_(duration) {}

  int n() const override { return static_cast<int>(channels_.size()); }
  double duration() const override { return duration_; }
  VecX value(double t) const override;

 private:
  std::vector<Channel> channels_;
  double duration_;
};

// Mollification of a schedule by a compactly supported smooth bump kernel:
// value(t) = int base(t - u) k_w(u) du with the base extended constantly
// beyond [0, T].  The convolution is evaluated by piecewise Gauss quadrature
// split at the base's breakpoints, so piecewise-constant inputs are exact.
class MollifiedSchedule final : public ControlSchedule {
 public:
  MollifiedSchedule(SchedulePtr base, double width);

  int n() const override { return base_->n(); }
  double duration() const override { return base_->duration(); }
  VecX value(double t) const override;

 private:
  SchedulePtr base_;
  double width_;
  std::vector<double> base_breaks_;
};

// smooth_controls: the mollified replacement of a schedule, L1-close to it.
SchedulePtr smooth_controls(SchedulePtr schedule, double width);

// L1 distance between two schedules of equal n and duration, by fine
// piecewise Gauss quadrature split at both breakpoint sets.
double schedule_l1_distance(const ControlSchedule& a, const ControlSchedule& b,
                            int points_per_piece = 64);

}  // namespace swim
