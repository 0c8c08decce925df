#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace efdvd {

/// Dense 2x2 real block.
struct Block2 {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;
};

Block2 operator*(const Block2& a, const Block2& b);
Block2 operator-(const Block2& a, const Block2& b);

/// Inverse with an absolute determinant guard; throws std::runtime_error on
/// (near-)singular input.
Block2 inverse(const Block2& b);

/** Direct solver for the periodic block-tridiagonal system
 *
 *   A x = b,   A[m][m] = diag[m],  A[m][m+1] += off,  A[m][m-1] += off
 *
 * with indices mod n (for n = 2 both neighbour contributions land on the
 * same block, which matches a periodic three-point stencil on two nodes).
 * Factorization is block elimination of the non-periodic tridiagonal part
 * plus a rank-4 corner correction, O(n) per solve.  solve() finishes with a
 * single iterative-refinement pass, which in practice leaves the residual
 * ||A x - b|| at a few ulps of ||b||.
 */
class CyclicBlockSolver {
 public:
  /// Factors immediately; throws std::runtime_error on pivot breakdown.
  CyclicBlockSolver(std::vector<Block2> diag, const Block2& off);

  std::size_t blocks() const { return diag_.size(); }

  /// rhs and result are packed per block: x = (x_0^1, x_0^2, x_1^1, ...).
  std::vector<double> solve(std::span<const double> rhs) const;

  /// A times x, for residual checks.
  std::vector<double> apply(std::span<const double> x) const;

 private:
  std::vector<double> solve_once(std::span<const double> rhs) const;
  std::vector<double> solve_tridiag(std::span<const double> rhs) const;

  std::vector<Block2> diag_;
  Block2 off_;
  bool dense_ = false;

  // block elimination of the tridiagonal part: pivot inverses
  std::vector<Block2> pivot_inv_;
  // corner correction: columns of Z = T^{-1} [E_0 E_{n-1}] and the LU-ready
  // 4x4 capacitance matrix
  std::vector<std::array<double, 4>> corner_z_;
  std::array<std::array<double, 4>, 4> cap_;
  std::array<int, 4> cap_perm_;

  // dense fallback (n == 2): row-major LU with partial pivoting
  std::vector<double> dense_lu_;
  std::vector<int> dense_perm_;
};

}  // namespace efdvd
