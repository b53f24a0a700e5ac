#pragma once

#include <string>
#include <utility>
#include <vector>

#include "swim/dynamics.hpp"
#include "swim/schedule.hpp"
#include "swim/types.hpp"

namespace swim {

// Number formatting used by every emitted file: 17 significant digits, so
// doubles survive a write/parse round trip exactly and reruns are
// byte-identical.
std::string format_double(double v);

// Minimal JSON document builder.  Objects keep insertion order; numbers go
// through format_double.  This is all the structure the reports need.
class JsonValue {
 public:
  static JsonValue number(double v);
  static JsonValue integer(long long v);
  static JsonValue boolean(bool v);
  static JsonValue text(std::string v);
  static JsonValue array(std::vector<JsonValue> items);
  static JsonValue object();

  // Row-major nested arrays for matrices, flat arrays for vectors.
  static JsonValue matrix(const MatX& m);
  static JsonValue vector(const VecX& v);

  // Appends a key (objects only; keys are expected unique by construction).
  JsonValue& set(const std::string& key, JsonValue value);

  // Serialized document, two-space indentation, LF endings, trailing newline.
  std::string dump() const;

 private:
  enum class Kind { Null, Number, Boolean, Text, Array, Object };
  Kind kind_ = Kind::Null;
  std::string scalar_;  // preformatted number / text payload / "true" / "false"
  std::vector<JsonValue> items_;
  std::vector<std::pair<std::string, JsonValue>> members_;

  void write(std::string& out, int depth) const;
};

// Writes content to a temporary file next to `path`, then renames it into
// place, so readers never observe a half-written file.
void write_text_file(const std::string& path, const std::string& content);

// Trajectory CSV: t, rotation row-major, position, shape, body velocities.
std::string trajectory_csv(const Trajectory& trajectory);

// Schedule CSV: t_start, t_end, control rates; one row per constant segment.
std::string schedule_csv(const PiecewiseConstantSchedule& schedule);

}  // namespace swim
