#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trilat/geometry.hpp"
#include "trilat/measurement.hpp"
#include "trilat/relation.hpp"

namespace trilat {

/// Exact determinant of a small integer matrix (fraction-free elimination).
std::int64_t integer_determinant(const Eigen::MatrixXi& m);

/// Exact rational inverse rounded to double; cached per matrix. Throws
/// InvalidArgument when the matrix is singular.
const Eigen::MatrixXd& rational_inverse(const Eigen::MatrixXi& m);

struct MembershipVerdict {
  bool member = false;
  std::optional<LengthVector> recovered_lengths;  // N^{-1} w when member
  LengthVector solved;                            // N^{-1} w, always
  double cm_residual = 0.0;                       // normalized Cayley-Menger value
};

/// Is w (an ordered D-tuple) a point of N(L_{d,d+2})?
///
/// Solves u = N^{-1} w exactly against the integer matrix, then requires all
/// u_i > 0, a vanishing Cayley-Menger determinant for u^2, and a positive
/// semidefinite Gram matrix of rank <= d.
MembershipVerdict membership_L(std::span<const double> w, const Eigen::MatrixXi& matrix, int d,
                               double tol = kDefaultTol);
MembershipVerdict membership_L(std::span<const double> w, const CanonicalMatrix& matrix,
                               double tol = kDefaultTol);
/// Edge-length tuple (identity matrix).
MembershipVerdict membership_L(std::span<const double> w, int d, double tol = kDefaultTol);

enum class SingularType { kTypeI, kTypeII, kTypeIII };

// One of the 60 linear 3-spaces making up the singular locus of L_{2,4}.
struct Stratum {
  SingularType type = SingularType::kTypeI;
  int ordinal = 0;                         // 0..59 in enumeration order
  std::array<int, 5> signs{};              // Type I: s02, s12, s03, s13, s23
  Edge collapsed{0, 1};                    // Type II
  std::array<int, 2> collapse_signs{};     // Type II: signs for the two remaining vertices
  std::array<int, 3> triangle{};           // Type III
  std::array<std::array<double, 6>, 3> equations{};  // linear forms that vanish on the stratum

  std::string describe() const;
};

const std::vector<Stratum>& singular_strata_L24();

struct SingularityVerdict {
  bool singular = false;
  std::optional<Stratum> stratum;  // first witness in enumeration order
};

/// Lengths l are in edge order (01, 02, 12, 03, 13, 23).
SingularityVerdict is_singular_L24(std::span<const double> l, double tol = kDefaultTol);

/// Rank-6 certificate for d = 2: w non-singular on N(L_{2,4}) and its first
/// three values free of b^2-bounded integer relations.
bool rank6_shortcut(std::span<const double> w, const Eigen::MatrixXi& matrix, int b,
                    double tol = kDefaultTol, double relation_tol = kDefaultRelationTol);

}  // namespace trilat
