#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "newton_lab/multi_index.h"
#include "newton_lab/polynomial.h"

namespace newton_lab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// The body V_{lambda,sigma} = { t : (sum_j |t_j/sigma_j|^lambda)^{1/lambda} <= 1 }
/// with lambda in [1, inf]. Cubes, balls, octahedra and parallelepipeds are
/// the cases lambda = inf, 2, 1, inf. Every such body is symmetric about all
/// coordinate hyperplanes.
class ConvexBody {
 public:
  ConvexBody(double lambda, std::vector<double> sigma);

  static ConvexBody cube(int m, double half_width = 1.0);
  static ConvexBody ball(int m, double radius = 1.0);
  static ConvexBody octahedron(int m, double radius = 1.0);
  static ConvexBody parallelepiped(std::vector<double> half_widths);

  int dim() const noexcept { return static_cast<int>(sigma_.size()); }
  double lambda() const noexcept { return lambda_; }
  const std::vector<double>& sigma() const noexcept { return sigma_; }
  bool is_parallelepiped() const noexcept { return lambda_ == kInfinity; }

  /// Minkowski gauge (sum_j |t_j/sigma_j|^lambda)^{1/lambda}; t is in aV iff gauge(t) <= a.
  double gauge(std::span<const double> t) const;

  /// Human readable name: cube/ball/octahedron/parallelepiped/lambda-body.
  std::string describe() const;

  friend bool operator==(const ConvexBody&, const ConvexBody&) = default;

 private:
  double lambda_;
  std::vector<double> sigma_;
};

/// Relative tolerance on the defining inequality for boundary points.
inline constexpr double kBoundaryTolerance = 1e-12;

/// t in aV (closed), with relative boundary tolerance 1e-12.
bool contains(const ConvexBody& body, std::span<const double> t, double a = 1.0);

/// V* = V_{lambda', 1/sigma} with 1/lambda + 1/lambda' = 1.
ConvexBody polar(const ConvexBody& body);

/// sup_{t in V} |t . z| for real z (closed form: weighted l_{lambda'} norm).
double dual_norm(const ConvexBody& body, std::span<const double> z);

/// sup_{t in V} |t . z| for complex z. Since |t.z| = max_phi t.Re(e^{-i phi} z),
/// this is the maximum over phi of the real dual norm of Re(e^{-i phi} z),
/// found by a dense phase scan followed by golden-section refinement.
double dual_norm(const ConvexBody& body, std::span<const Complex> z);

inline constexpr std::size_t kDefaultLatticeCap = 1'000'000;

/// aV intersected with Z^m_+, graded-lexicographic order. Boundary points are
/// included. Throws CapacityError past `cap` points.
std::vector<MultiIndex> lattice_points(const ConvexBody& body, double a, std::size_t cap = kDefaultLatticeCap);

/// aV intersected with Z^m (or Z^m_+ when nonnegative_only), graded-lexicographic order.
std::vector<Frequency> lattice_points_signed(const ConvexBody& body, double a, std::size_t cap = kDefaultLatticeCap,
                                             bool nonnegative_only = false);

/// Pi^m(u) = { t : |t_j| <= u_j }, centred at the origin.
struct Parallelepiped {
  std::vector<double> u;

  int dim() const noexcept { return static_cast<int>(u.size()); }
  bool contains(std::span<const double> t) const;
  ConvexBody as_body() const { return ConvexBody::parallelepiped(u); }
};

struct CoverOptions {
  std::size_t sample_count = 10'000;
  std::size_t greedy_budget = 100'000;
  /// Skips the leading points of the quasi-random stream.
  std::size_t sample_offset = 0;
};

struct Covering {
  std::vector<Parallelepiped> family;
  /// min over k, j of u^{(k)}_j.
  double min_half_width = 0;
  /// Half-widths of the axis slabs Pi_l before the sqrt(delta) inflation.
  std::vector<double> slab_long;   // C6 per axis
  std::vector<double> slab_short;  // C7 per axis
  std::size_t samples_checked = 0;
  std::size_t samples_covered = 0;

  double coverage() const {
    return samples_checked == 0 ? 1.0 : static_cast<double>(samples_covered) / static_cast<double>(samples_checked);
  }
};

/// Finite family {Pi^m(u^(k))} with V inside the union (on samples) and every
/// corner in delta V. Built from the inflated axis slabs sqrt(delta) Pi_l plus
/// greedily added Pi^m(u) around uncovered samples.
Covering cover_with_parallelepipeds(const ConvexBody& body, double delta, const CoverOptions& options = {});

/// Low-discrepancy points of V (Sobol points of the bounding box kept if inside V).
std::vector<std::vector<double>> sample_body(const ConvexBody& body, std::size_t count, std::size_t offset = 0);

/// Checks on sampled points that all sign-flipped copies lie in V.
bool check_pi_condition(const ConvexBody& body, std::size_t sample_count);

}  // namespace newton_lab
