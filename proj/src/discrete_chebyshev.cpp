#include "newton_lab/discrete_chebyshev.h"

#include <cmath>
#include <limits>
#include <numbers>

#include "newton_lab/errors.h"

namespace newton_lab {

namespace {

constexpr int kMaxIterations = 50'000;
constexpr int kStallBeforeBland = 50;
constexpr double kPerturbation = 1e-9;
constexpr double kAcceptViolation = 1e-9;

struct Column {
  int point = -1;  // -1 for an artificial column
  double angle = 0;
  int row = -1;  // artificial: unit row

  // Fixed ordering of all columns for Bland's rule; artificials first.
  long long key() const {
    if (point < 0) return -1 - row;
    return static_cast<long long>(point) * 4096 + static_cast<long long>(std::lround(angle * 512) + 2048);
  }
};

class Simplex {
 public:
  explicit Simplex(const DiscreteChebyshevProblem& pb)
      : pb_(pb), k_(pb.objective.size()), complex_(pb.rows_im.size() > 0) {
    if (pb.rows_re.cols() != k_) throw DimensionMismatch("row width differs from objective size");
    if (complex_ && (pb.rows_im.rows() != pb.rows_re.rows() || pb.rows_im.cols() != k_))
      throw DimensionMismatch("imaginary rows shape differs from real rows");
    if (pb.rows_re.rows() == 0) throw DomainError("discrete Chebyshev problem has no points");
    scale_ = std::max(pb.objective.cwiseAbs().maxCoeff(), 1e-300);
    // A fixed small perturbation of the right-hand side keeps basic solutions
    // nondegenerate; the multipliers depend on the basis only, so y stays
    // feasible and the unperturbed value is recomputed from it.
    rhs_ = pb.objective;
    for (Eigen::Index r = 0; r < k_; ++r) {
      const double jitter = 1.0 + 0.5 * std::sin(1.618033988749895 * static_cast<double>(r + 1));
      rhs_[r] += (pb.objective[r] < 0 ? -1.0 : 1.0) * kPerturbation * scale_ * jitter;
    }
  }

  DiscreteChebyshevSolution run() {
    basis_.resize(k_);
    for (Eigen::Index r = 0; r < k_; ++r) basis_[r] = Column{-1, 0, static_cast<int>(r)};
    iterate(/*phase=*/1);
    refactor();
    const double infeasibility = artificial_mass();
    if (infeasibility > 1e-9 * scale_)
      throw DomainError("point set does not determine the extremal problem (primal unbounded); refine the grid");
    drive_out_artificials();
    iterate(/*phase=*/2);
    refactor();

    DiscreteChebyshevSolution sol;
    const Eigen::VectorXd pi = duals(2);
    sol.y = pi / std::max(1.0, max_violation(pi));
    sol.value = pb_.objective.dot(sol.y);
    sol.iterations = iterations_;
    const Eigen::VectorXd weights = lu_.solve(pb_.objective);
    // Nonnegative weights reproducing g certify sum(w) as an upper bound.
    sol.upper_bound = weights.minCoeff() >= 0 ? weights.sum() : pb_.objective.dot(pi);
    for (Eigen::Index r = 0; r < k_; ++r)
      if (basis_[r].point >= 0 && weights[r] > 0) {
        sol.reference_points.push_back(basis_[r].point);
        sol.reference_weights.push_back(weights[r]);
      }
    return sol;
  }

 private:
  Eigen::VectorXd column(const Column& c) const {
    if (c.point < 0) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(k_);
      e[c.row] = pb_.objective[c.row] < 0 ? -1.0 : 1.0;
      return e;
    }
    Eigen::VectorXd a = std::cos(c.angle) * pb_.rows_re.row(c.point).transpose();
    if (complex_) a -= std::sin(c.angle) * pb_.rows_im.row(c.point).transpose();
    return a;
  }

  double cost(const Column& c, int phase) const {
    if (c.point < 0) return phase == 1 ? 1.0 : 0.0;
    return phase == 1 ? 0.0 : 1.0;
  }

  void refactor() {
    Eigen::MatrixXd b(k_, k_);
    for (Eigen::Index r = 0; r < k_; ++r) b.col(r) = column(basis_[r]);
    lu_.compute(b);
    xb_ = lu_.solve(rhs_);
  }

  Eigen::VectorXd duals(int phase) const {
    Eigen::VectorXd cb(k_);
    for (Eigen::Index r = 0; r < k_; ++r) cb[r] = cost(basis_[r], phase);
    return lu_.transpose().solve(cb);
  }

  double artificial_mass() const {
    double s = 0;
    for (Eigen::Index r = 0; r < k_; ++r)
      if (basis_[r].point < 0) s += std::abs(xb_[r]);
    return s;
  }

  // Best admissible angle for point i against multipliers pi, returning Re(e^{i phi} r_i . pi).
  double best_angle(double s_re, double s_im, double& angle) const {
    if (!complex_) {
      angle = s_re >= 0 ? 0.0 : std::numbers::pi;
      return std::abs(s_re);
    }
    // Re(e^{i phi}(s_re + i s_im)) = cos(phi) s_re - sin(phi) s_im, maximal at phi = -arg(s).
    const double exact = -std::atan2(s_im, s_re);
    if (pb_.facets <= 0) {
      angle = exact;
      return std::hypot(s_re, s_im);
    }
    const double step = 2 * std::numbers::pi / pb_.facets;
    const double k = std::round(exact / step);
    angle = k * step;
    return std::cos(angle) * s_re - std::sin(angle) * s_im;
  }

  // max_i |r_i . y| under the admissible angle set.
  double max_violation(const Eigen::VectorXd& y) const {
    const Eigen::VectorXd s_re = pb_.rows_re * y;
    Eigen::VectorXd s_im;
    if (complex_) s_im = pb_.rows_im * y;
    double worst = 0, angle;
    for (Eigen::Index i = 0; i < s_re.size(); ++i)
      worst = std::max(worst, best_angle(s_re[i], complex_ ? s_im[i] : 0.0, angle));
    return worst;
  }

  bool is_basic(int point, double angle) const {
    for (const auto& c : basis_)
      if (c.point == point && std::abs(std::remainder(c.angle - angle, 2 * std::numbers::pi)) < 1e-12) return true;
    return false;
  }

  void iterate(int phase) {
    int stall = 0;
    double last_objective = std::numeric_limits<double>::infinity();
    for (; iterations_ < kMaxIterations; ++iterations_) {
      refactor();
      const Eigen::VectorXd pi = duals(phase);
      const Eigen::VectorXd s_re = pb_.rows_re * pi;
      Eigen::VectorXd s_im;
      if (complex_) s_im = pb_.rows_im * pi;
      const double real_cost = phase == 1 ? 0.0 : 1.0;
      const double tol = 1e-10;
      const bool bland = stall >= kStallBeforeBland;

      int entering = -1;
      double entering_angle = 0, best = tol;
      for (Eigen::Index i = 0; i < s_re.size(); ++i) {
        double angle;
        const double v = best_angle(s_re[i], complex_ ? s_im[i] : 0.0, angle);
        const double improvement = v - real_cost;
        if (improvement > best && !is_basic(static_cast<int>(i), angle)) {
          entering = static_cast<int>(i);
          entering_angle = angle;
          best = improvement;
          if (bland) break;
        }
      }
      if (entering < 0) return;
      // Stalled on a flat face with violations this small: pi / (1 + best) is
      // feasible and within a factor 1 + best of optimal.
      if (phase == 2 && stall >= kStallBeforeBland && best < kAcceptViolation) return;

      const Column q{entering, entering_angle, -1};
      const Eigen::VectorXd u = lu_.solve(column(q));
      int leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      const double pivot_tol = 1e-11 * std::max(1.0, u.cwiseAbs().maxCoeff());
      for (Eigen::Index r = 0; r < k_; ++r) {
        if (u[r] <= pivot_tol) continue;
        const double t = std::max(xb_[r], 0.0) / u[r];
        const bool better = t < ratio * (1 - 1e-12) ||
                            (t <= ratio * (1 + 1e-12) && leave >= 0 &&
                             (bland ? basis_[r].key() < basis_[leave].key()
                                    : (basis_[r].point < 0 && basis_[leave].point >= 0) ||
                                          (u[r] > u[leave] && (basis_[r].point < 0) == (basis_[leave].point < 0))));
        if (leave < 0 || better) {
          leave = static_cast<int>(r);
          ratio = t;
        }
      }
      if (leave < 0) throw Error("dual simplex unbounded; objective is not bounded below");
      basis_[leave] = q;

      const double objective = [&] {
        double o = 0;
        for (Eigen::Index r = 0; r < k_; ++r) o += cost(basis_[r], phase) * std::max(xb_[r], 0.0);
        return o;
      }();
      if (!std::isfinite(last_objective) || objective < last_objective - 1e-14 * std::abs(last_objective)) {
        stall = 0;
        last_objective = objective;
      } else {
        ++stall;
      }
    }
    throw ConvergenceError("discrete Chebyshev simplex exceeded its iteration limit", pb_.objective.norm());
  }

  void drive_out_artificials() {
    for (Eigen::Index r = 0; r < k_; ++r) {
      if (basis_[r].point >= 0) continue;
      refactor();
      // Row r of B^{-1} A; pick the column with the largest pivot.
      Eigen::VectorXd e = Eigen::VectorXd::Zero(k_);
      e[r] = 1.0;
      const Eigen::VectorXd row = lu_.transpose().solve(e);
      const Eigen::VectorXd p_re = pb_.rows_re * row;
      Eigen::VectorXd p_im;
      if (complex_) p_im = pb_.rows_im * row;
      int best_point = -1;
      double best_angle_value = 0, best_pivot = 1e-9;
      for (Eigen::Index i = 0; i < p_re.size(); ++i) {
        const double candidates[2] = {p_re[i], complex_ ? -p_im[i] : 0.0};
        for (int c = 0; c < (complex_ ? 2 : 1); ++c)
          if (std::abs(candidates[c]) > best_pivot) {
            best_pivot = std::abs(candidates[c]);
            best_point = static_cast<int>(i);
            best_angle_value = c == 0 ? 0.0 : std::numbers::pi / 2;
          }
      }
      if (best_point >= 0) basis_[r] = Column{best_point, best_angle_value, -1};
    }
  }

  const DiscreteChebyshevProblem& pb_;
  Eigen::Index k_;
  bool complex_;
  double scale_;
  Eigen::VectorXd rhs_;
  std::vector<Column> basis_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  Eigen::VectorXd xb_;
  int iterations_ = 0;
};

}  // namespace

DiscreteChebyshevSolution solve_discrete_chebyshev(const DiscreteChebyshevProblem& problem) {
  return Simplex(problem).run();
}

}  // namespace newton_lab
