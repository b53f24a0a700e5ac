#pragma once

#include <functional>
#include <memory>

#include "swim/brackets.hpp"
#include "swim/dynamics.hpp"
#include "swim/schedule.hpp"
#include "swim/types.hpp"

namespace swim {

// Tracking target on [0, duration]: rigid pose over time, optionally a shape
// path.  When target_shape is empty the planner still returns the shape to
// its initial value but does not count shape deviation in the error.
struct TrackingProblem {
  std::function<Mat3(double)> target_rot;
  std::function<Vec3(double)> target_pos;
  std::function<VecX(double)> target_shape;  // may be null
  double duration = 1.0;
  double tolerance = 1e-2;
};

struct PlanOptions {
  int max_legs = 200000;
  int refinements = 2;      // doublings of the leg count if tolerance is missed
  double svd_tol = 1e-8;    // rank threshold of the controllability pre-check
  double newton_step = 1e-6;
};

struct PlanResult {
  std::shared_ptr<const PiecewiseConstantSchedule> schedule;
  double sup_error = 0.0;       // sup over time of the tracking error
  double endpoint_error = 0.0;  // error at the final time
  int legs = 0;
  bool tolerance_met = false;   // sup < tol and endpoint < tol/10
};

struct TrackReport {
  double sup_error = 0.0;
  double endpoint_error = 0.0;
};

// The check the planner runs on its own output, exposed so a schedule read
// back from disk reproduces the reported numbers: re-integrates `controls`
// from `initial` at half the shortest gap between control breakpoints (every
// piece boundary, where commutator transients peak, lands on a sample) and
// takes the sup / endpoint tracking errors against the problem target.  The
// error counts shape deviation only when the problem prescribes a shape path.
TrackReport verify_tracking(const MassModel& model, const ControlSchedule& controls,
                            const BodyState& initial, const TrackingProblem& problem);

// Plans piecewise-constant controls tracking the target within tolerance:
// the horizon is cut into legs; each leg's pose defect is matched by least
// squares on the control fields (straight segments) plus their first-order
// brackets (four-segment commutator squares with amplitude sqrt of the
// requested coefficient), followed by one Newton pass on the leg endpoint.
// The reported errors come from re-integrating the returned schedule.
// Throws NotControllable when the bracket span is rank deficient at the
// initial shape.
PlanResult plan_tracking(const MassModel& model, const BodyState& initial,
                         const TrackingProblem& problem, const PlanOptions& opts = {});

}  // namespace swim
