#include "swim/brackets.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <cmath>
#include <vector>

#include "swim/errors.hpp"

namespace swim {

namespace {

// All rigid responses at once: X(s) = -Mr(s)^{-1} N(s), 6 x n.
MatX rigid_response(const MassModel& model, const VecX& s) {
  const MassMatrices mm = model.at(s);
  Eigen::LLT<Mat6> llt(mm.Mr());
  if (llt.info() != Eigen::Success)
    throw MassMatrixSingular("total mass matrix is not positive definite");
  return -llt.solve(mm.N);
}

// Cross-product pairing of two rigid vectors (rotation; translation):
// (a; b) star (a'; b') = (a x a'; a x b' - a' x b).
Vec6 star(const Vec6& lhs, const Vec6& rhs) {
  const Vec3 a = lhs.head<3>(), b = lhs.tail<3>();
  const Vec3 ap = rhs.head<3>(), bp = rhs.tail<3>();
  Vec6 out;
  out.head<3>() = a.cross(ap);
  out.tail<3>() = a.cross(bp) - ap.cross(b);
  return out;
}

// Body-frame rigid part of a left-nested bracket word, evaluated by
// recursion: [A, B] = star(A, B) + D_{shape(A)} B - D_{shape(B)} A, where
// shape(word) is f_i for a bare field and zero otherwise, and D_d is the
// central difference along direction d (skipped when d = 0).
class WordEvaluator {
 public:
  WordEvaluator(const MassModel& model, double h, bool richardson)
      : model_(model), h_(h), richardson_(richardson) {}

  Vec6 rigid(const std::vector<int>& word, const VecX& s) const {
    if (word.size() == 1) return rigid_response(model_, s).col(word[0]);
    std::vector<int> prefix(word.begin(), word.end() - 1);
    const int last = word.back();

    Vec6 out = star(rigid(prefix, s), rigid_response(model_, s).col(last));
    if (prefix.size() == 1) {
      // D_{f_first} X_last.  The lambda must own its result: a block view
      // into the returned temporary would dangle.
      const int first = prefix[0];
      out += derivative(
          [&](const VecX& q) -> Vec6 { return rigid_response(model_, q).col(last); }, s, first);
    }
    // minus D_{f_last} of the prefix word
    out -= derivative([&](const VecX& q) -> Vec6 { return rigid(prefix, q); }, s, last);
    return out;
  }

 private:
  template <class F>
  Vec6 derivative(F&& f, const VecX& s, int dir) const {
    auto central = [&](double step) {
      VecX lo = s, hi = s;
      lo[dir] -= step;
      hi[dir] += step;
      return Vec6((f(hi) - f(lo)) / (2.0 * step));
    };
    const Vec6 coarse = central(h_);
    if (!richardson_) return coarse;
    const Vec6 fine = central(0.5 * h_);
    return (4.0 * fine - coarse) / 3.0;
  }

  const MassModel& model_;
  double h_;
  bool richardson_;
};

}  // namespace

VecX TangentVector::stacked() const {
  VecX out(6 + shape.size());
  out.head<3>() = rot;
  out.segment<3>(3) = trans;
  out.tail(shape.size()) = shape;
  return out;
}

MatX control_matrix(const MassModel& model, const VecX& s) { return rigid_response(model, s); }

TangentVector vector_field(const MassModel& model, int i, const VecX& s) {
  if (i < 0 || i >= model.n()) throw ConfigError("control field index out of range");
  TangentVector out;
  const Vec6 rigid = rigid_response(model, s).col(i);
  out.rot = rigid.head<3>();
  out.trans = rigid.tail<3>();
  out.shape = VecX::Unit(model.n(), i);
  return out;
}

TangentVector lift_field(const TangentVector& body, const Mat3& rot) {
  TangentVector out = body;
  out.rot = rot * body.rot;
  out.trans = rot * body.trans;
  return out;
}

TangentVector lie_bracket_numeric(const MassModel& model, int i, int j, const VecX& s, double h,
                                  bool richardson) {
  if (i < 0 || i >= model.n() || j < 0 || j >= model.n())
    throw ConfigError("bracket index out of range");
  TangentVector out;
  out.shape = VecX::Zero(model.n());
  if (i == j) return out;

  const WordEvaluator eval(model, h, richardson);
  const Vec6 rigid = eval.rigid({i, j}, s);
  out.rot = rigid.head<3>();
  out.trans = rigid.tail<3>();
  return out;
}

TangentVector lie_bracket_closed_form(const Vec3& inertia, double mass, const Vec6& mu, int i,
                                      int j) {
  if (i > j) {
    TangentVector flipped = lie_bracket_closed_form(inertia, mass, mu, j, i);
    flipped.rot = -flipped.rot;
    flipped.trans = -flipped.trans;
    return flipped;
  }

  TangentVector out;
  out.shape = VecX::Zero(6);
  const auto rot_pair = [&](int a, int b) {
    // Both indices rotational; the bracket spins about the third axis.
    const int c = 3 - a - b;
    const double numerator = inertia[a] * inertia[b] * (mu[c] - mu[a] - mu[b]) +
                             mu[a] * mu[b] * (inertia[c] - inertia[a] - inertia[b]);
    double denominator = 1.0;
    for (int k = 0; k < 3; ++k) denominator *= inertia[k] + mu[k];
    out.rot = numerator / denominator * Vec3::Unit(a).cross(Vec3::Unit(b));
  };
  const auto mixed_pair = [&](int a, int t) {
    // Rotational a against translational axis t; the bracket translates
    // along a x t and vanishes when the axes coincide.
    const int c = 3 - a - t;
    const double numerator = inertia[a] * mass * (mu[3 + c] - mu[3 + t]);
    const double denominator =
        (inertia[a] + mu[a]) * (mass + mu[3 + t]) * (mass + mu[3 + c]);
    out.trans = numerator / denominator * Vec3::Unit(a).cross(Vec3::Unit(t));
  };

  if (i == 0 && j == 1) rot_pair(0, 1);
  else if (i == 0 && j == 2) rot_pair(0, 2);
  else if (i == 1 && j == 2) rot_pair(1, 2);
  else if (i == 1 && j == 3) mixed_pair(1, 0);
  else if (i == 2 && j == 3) mixed_pair(2, 0);
  else if (i == 2 && j == 4) mixed_pair(2, 1);
  else throw Unsupported("no published closed form for this bracket pair");
  return out;
}

ConditionReport controllability_condition(const Vec3& inertia, double mass, const Vec6& mu,
                                          double tol) {
  ConditionReport report;
  const double i1 = inertia[0], i2 = inertia[1], i3 = inertia[2];
  const double m1 = mu[0], m2 = mu[1], m3 = mu[2];
  report.factors[0] = i1 * i2 * (-m1 - m2 + m3) + m1 * m2 * (-i1 - i2 + i3);
  report.factors[1] = i1 * i3 * (m1 - m2 + m3) + m1 * m3 * (i1 - i2 + i3);
  report.factors[2] = i2 * i3 * (m1 - m2 - m3) + m2 * m3 * (i1 - i2 - i3);
  report.mu4_minus_mu6 = mu[3] - mu[5];
  report.mu5_minus_mu4 = mu[4] - mu[3];

  const double rot_scale =
      std::pow(inertia.cwiseAbs().maxCoeff() + mu.head<3>().cwiseAbs().maxCoeff(), 3);
  const double trans_scale = mass + mu.tail<3>().cwiseAbs().maxCoeff();
  report.controllable = report.factors.cwiseAbs().minCoeff() > tol * rot_scale &&
                        std::abs(report.mu4_minus_mu6) > tol * trans_scale &&
                        std::abs(report.mu5_minus_mu4) > tol * trans_scale;
  return report;
}

RankReport lie_rank(const MassModel& model, const VecX& s, int depth, double svd_tol) {
  if (depth < 1) throw ConfigError("bracket depth must be at least 1");
  const int n = model.n();
  const WordEvaluator eval(model, 1e-4, true);

  std::vector<VecX> columns;
  const MatX base = rigid_response(model, s);
  for (int i = 0; i < n; ++i) {
    VecX col(6 + n);
    col.head<6>() = base.col(i);
    col.tail(n) = VecX::Unit(n, i);
    columns.push_back(col);
  }

  std::vector<std::vector<int>> words;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) words.push_back({i, j});
  if (depth >= 3) {
    std::vector<std::vector<int>> triples;
    for (const auto& w : words)
      for (int k = 0; k < n; ++k) {
        auto t = w;
        t.push_back(k);
        triples.push_back(std::move(t));
      }
    words.insert(words.end(), triples.begin(), triples.end());
  }
  if (depth >= 2) {
    for (const auto& w : words) {
      VecX col = VecX::Zero(6 + n);
      col.head<6>() = eval.rigid(w, s);
      columns.push_back(col);
    }
  }

  MatX stacked(6 + n, static_cast<int>(columns.size()));
  for (size_t c = 0; c < columns.size(); ++c) stacked.col(static_cast<int>(c)) = columns[c];

  Eigen::JacobiSVD<MatX> svd(stacked);
  const VecX sv = svd.singularValues();
  const double cutoff = svd_tol * (sv.size() > 0 ? sv.maxCoeff() : 0.0);

  RankReport report;
  report.depth = depth;
  report.columns = static_cast<int>(columns.size());
  report.svd_tol = svd_tol;
  report.singular_values = sv;
  for (int k = 0; k < sv.size(); ++k)
    if (sv[k] > cutoff) ++report.rank;
  return report;
}

}  // namespace swim
