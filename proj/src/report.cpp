#include "swim/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <utility>

#include "swim/errors.hpp"

namespace swim {

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

JsonValue JsonValue::number(double v) {
  JsonValue out;
  out.kind_ = Kind::Number;
  out.scalar_ = format_double(v);
  return out;
}

JsonValue JsonValue::integer(long long v) {
  JsonValue out;
  out.kind_ = Kind::Number;
  out.scalar_ = std::to_string(v);
  return out;
}

JsonValue JsonValue::boolean(bool v) {
  JsonValue out;
  out.kind_ = Kind::Boolean;
  out.scalar_ = v ? "true" : "false";
  return out;
}

JsonValue JsonValue::text(std::string v) {
  JsonValue out;
  out.kind_ = Kind::Text;
  out.scalar_ = std::move(v);
  return out;
}

JsonValue JsonValue::array(std::vector<JsonValue> items) {
  JsonValue out;
  out.kind_ = Kind::Array;
  out.items_ = std::move(items);
  return out;
}

JsonValue JsonValue::object() {
  JsonValue out;
  out.kind_ = Kind::Object;
  return out;
}

JsonValue JsonValue::matrix(const MatX& m) {
  std::vector<JsonValue> rows;
  rows.reserve(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<JsonValue> row;
    row.reserve(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j)));
    rows.push_back(array(std::move(row)));
  }
  return array(std::move(rows));
}

JsonValue JsonValue::vector(const VecX& v) {
  std::vector<JsonValue> items;
  items.reserve(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) items.push_back(number(v[i]));
  return array(std::move(items));
}

JsonValue& JsonValue::set(const std::string& key, JsonValue value) {
  members_.emplace_back(key, std::move(value));
  return *this;
}

namespace {

void write_escaped(std::string& out, const std::string& text) {
  out += '"';
  for (const char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void indent(std::string& out, int depth) { out.append(static_cast<std::size_t>(2 * depth), ' '); }

}  // namespace

void JsonValue::write(std::string& out, int depth) const {
  switch (kind_) {
    case Kind::Null:
      out += "null";
      break;
    case Kind::Number:
    case Kind::Boolean:
      out += scalar_;
      break;
    case Kind::Text:
      write_escaped(out, scalar_);
      break;
    case Kind::Array: {
      if (items_.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (std::size_t i = 0; i < items_.size(); ++i) {
        indent(out, depth + 1);
        items_[i].write(out, depth + 1);
        if (i + 1 < items_.size()) out += ',';
        out += '\n';
      }
      indent(out, depth);
      out += ']';
      break;
    }
    case Kind::Object: {
      if (members_.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      for (std::size_t i = 0; i < members_.size(); ++i) {
        indent(out, depth + 1);
        write_escaped(out, members_[i].first);
        out += ": ";
        members_[i].second.write(out, depth + 1);
        if (i + 1 < members_.size()) out += ',';
        out += '\n';
      }
      indent(out, depth);
      out += '}';
      break;
    }
  }
}

std::string JsonValue::dump() const {
  std::string out;
  write(out, 0);
  out += '\n';
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw SwimError("cannot open for writing: " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw SwimError("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw SwimError("cannot move into place: " + path);
  }
}

std::string trajectory_csv(const Trajectory& trajectory) {
  const int n =
      trajectory.samples.empty() ? 0 : static_cast<int>(trajectory.samples.front().state.s.size());
  std::string out = "t,R11,R12,R13,R21,R22,R23,R31,R32,R33,r1,r2,r3";
  for (int i = 1; i <= n; ++i) out += ",s" + std::to_string(i);
  out += ",Om1,Om2,Om3,v1,v2,v3\n";

  for (const auto& sample : trajectory.samples) {
    out += format_double(sample.t);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) out += ',' + format_double(sample.state.R(i, j));
    for (int i = 0; i < 3; ++i) out += ',' + format_double(sample.state.r[i]);
    for (int i = 0; i < n; ++i) out += ',' + format_double(sample.state.s[i]);
    for (int i = 0; i < 3; ++i) out += ',' + format_double(sample.velocity.Omega[i]);
    for (int i = 0; i < 3; ++i) out += ',' + format_double(sample.velocity.v[i]);
    out += '\n';
  }
  return out;
}

std::string schedule_csv(const PiecewiseConstantSchedule& schedule) {
  std::string out = "t_start,t_end";
  for (int i = 1; i <= schedule.n(); ++i) out += ",lambda" + std::to_string(i);
  out += '\n';
  for (const auto& seg : schedule.segments()) {
    out += format_double(seg.t_start) + ',' + format_double(seg.t_end);
    for (Eigen::Index i = 0; i < seg.lambda.size(); ++i) out += ',' + format_double(seg.lambda[i]);
    out += '\n';
  }
  return out;
}

}  // namespace swim
