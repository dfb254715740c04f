#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "trilat/error.hpp"

namespace trilat {

/// Default zero-test tolerance for noiseless double-precision data.
inline constexpr double kDefaultTol = 1e-9;

/// An ordered list of n points in R^d, stored one point per row.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(Eigen::MatrixXd rows);
  Configuration(int dim, const std::vector<std::vector<double>>& points);

  int dim() const { return static_cast<int>(rows_.cols()); }
  int size() const { return static_cast<int>(rows_.rows()); }
  bool empty() const { return rows_.rows() == 0; }

  Eigen::VectorXd point(int i) const { return rows_.row(i).transpose(); }
  const Eigen::MatrixXd& rows() const { return rows_; }
  std::vector<std::vector<double>> to_vectors() const;

  Configuration subset(std::span<const int> indices) const;
  Configuration scaled(double s) const;
  void append(const Eigen::VectorXd& p);

 private:
  Eigen::MatrixXd rows_;
};

struct Edge {
  int i;
  int j;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Edges of K_n are grouped by their larger endpoint, then by the smaller one:
// for n = 4 the order is 01, 02, 12, 03, 13, 23 (vertices are 0-based).
inline int edge_count(int n) { return n * (n - 1) / 2; }
int edge_index(int i, int j);
Edge edge_at(int index);

/// Entries are l_ij (unsquared) or m_ij (squared) under the edge order above.
using LengthVector = Eigen::VectorXd;
using SquaredDistanceVector = Eigen::VectorXd;

double squared_distance(const Configuration& cfg, int i, int j);
LengthVector measure_all_lengths(const Configuration& cfg);
SquaredDistanceVector measure_all_squared(const Configuration& cfg);

/// det G for the (d+1)x(d+1) matrix G_aa = 2 m_{0a}, G_ab = m_{0a} + m_{0b} - m_{ab}.
/// Equals 288 V^2 for a tetrahedron when d = 2.
double cayley_menger_det(const SquaredDistanceVector& sq, int d);

/// |det G| / (mean squared length)^(d+1); scale free.
double cayley_menger_normalized(const SquaredDistanceVector& sq, int d);

bool cayley_menger_vanishes(const SquaredDistanceVector& sq, int d, double tol = kDefaultTol);

/// Realizes d+2 points in R^d from their squared distances.
///
/// The frame is fixed: point 0 at the origin, point 1 on the positive first
/// axis, point k (k <= d) in the half-space with positive (k)-th coordinate
/// and zero coordinates beyond it. Throws NotRealizable when the Gram matrix
/// is not positive semidefinite of rank <= d, and Degenerate when its rank
/// is below d.
Configuration embed_simplex(const SquaredDistanceVector& sq, int d, double tol = kDefaultTol);

/// Gram-matrix realizability check used by embed_simplex; true iff PSD with rank <= d.
bool is_euclidean_realizable(const SquaredDistanceVector& sq, int d, double tol = kDefaultTol);

bool are_congruent(const Configuration& a, const Configuration& b, double tol = kDefaultTol);

/// Scale s with lengths(b) ~= s * lengths(a), if the length vectors are proportional.
std::optional<double> are_similar_ordered(const Configuration& a, const Configuration& b,
                                          double tol = kDefaultTol);

/// Image of `extra` under the isometry taking anchor_src onto anchor_dst.
/// Both anchor sets hold d+1 points spanning R^d.
Eigen::VectorXd align_onto(const Configuration& anchor_src, const Configuration& anchor_dst,
                           const Eigen::VectorXd& extra, double tol = kDefaultTol);

double diameter(const Configuration& cfg);
double min_pairwise_distance(const Configuration& cfg);

}  // namespace trilat
