#include "efdvd/cyclic_block_solver.hpp"

#include <cmath>
#include <stdexcept>

namespace efdvd {

namespace {

constexpr double kDetFloor = 1e-280;

void axpy_block(const Block2& b, const double* x, double* y, double sign = 1.0) {
  y[0] += sign * (b.a11 * x[0] + b.a12 * x[1]);
  y[1] += sign * (b.a21 * x[0] + b.a22 * x[1]);
}

void require_finite(const Block2& b) {
  if (!std::isfinite(b.a11) || !std::isfinite(b.a12) || !std::isfinite(b.a21) ||
      !std::isfinite(b.a22))
    throw std::runtime_error("non-finite matrix block");
}

}  // namespace

Block2 operator*(const Block2& a, const Block2& b) {
  return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
          a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}

Block2 operator-(const Block2& a, const Block2& b) {
  return {a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
}

Block2 inverse(const Block2& b) {
  require_finite(b);
  const double det = b.a11 * b.a22 - b.a12 * b.a21;
  if (!(std::fabs(det) > kDetFloor)) throw std::runtime_error("singular 2x2 pivot");
  const double inv = 1.0 / det;
  return {b.a22 * inv, -b.a12 * inv, -b.a21 * inv, b.a11 * inv};
}

CyclicBlockSolver::CyclicBlockSolver(std::vector<Block2> diag, const Block2& off)
    : diag_(std::move(diag)), off_(off) {
  const std::size_t n = diag_.size();
  if (n < 2) throw std::invalid_argument("need at least 2 blocks");
  for (const Block2& b : diag_) require_finite(b);
  require_finite(off_);

  if (n == 2) {
    // Assemble the 4x4 by accumulation (both neighbour slots coincide) and
    // LU-factor it with partial pivoting.
    dense_ = true;
    dense_lu_.assign(16, 0.0);
    auto at = [&](std::size_t r, std::size_t c) -> double& { return dense_lu_[4 * r + c]; };
    for (std::size_t m = 0; m < 2; ++m) {
      const Block2& d = diag_[m];
      at(2 * m, 2 * m) = d.a11;
      at(2 * m, 2 * m + 1) = d.a12;
      at(2 * m + 1, 2 * m) = d.a21;
      at(2 * m + 1, 2 * m + 1) = d.a22;
      const std::size_t o = 2 * (1 - m);
      at(2 * m, o) += 2.0 * off_.a11;
      at(2 * m, o + 1) += 2.0 * off_.a12;
      at(2 * m + 1, o) += 2.0 * off_.a21;
      at(2 * m + 1, o + 1) += 2.0 * off_.a22;
    }
    dense_perm_.resize(4);
    for (int r = 0; r < 4; ++r) dense_perm_[r] = r;
    for (int c = 0; c < 4; ++c) {
      int pivot = c;
      for (int r = c + 1; r < 4; ++r)
        if (std::fabs(at(r, c)) > std::fabs(at(pivot, c))) pivot = r;
      if (!(std::fabs(at(pivot, c)) > kDetFloor))
        throw std::runtime_error("singular dense block system");
      if (pivot != c) {
        for (int k = 0; k < 4; ++k) std::swap(at(pivot, k), at(c, k));
        std::swap(dense_perm_[pivot], dense_perm_[c]);
      }
      for (int r = c + 1; r < 4; ++r) {
        const double f = at(r, c) / at(c, c);
        at(r, c) = f;
        for (int k = c + 1; k < 4; ++k) at(r, k) -= f * at(c, k);
      }
    }
    return;
  }

  // Block elimination of the tridiagonal part T: pivots
  //   D_0 = diag_0,   D_m = diag_m - off D_{m-1}^{-1} off.
  pivot_inv_.resize(n);
  pivot_inv_[0] = inverse(diag_[0]);
  for (std::size_t m = 1; m < n; ++m)
    pivot_inv_[m] = inverse(diag_[m] - off_ * pivot_inv_[m - 1] * off_);

  // Z = T^{-1} [E_0 E_{n-1}] for the corner correction A = T + U W U^T with
  // U = [E_0 E_{n-1}] and W = [[0, off], [off, 0]]; stored row-wise.
  std::vector<double> cols(2 * n, 0.0);
  corner_z_.assign(2 * n, {});
  for (int j = 0; j < 4; ++j) {
    std::fill(cols.begin(), cols.end(), 0.0);
    cols[j < 2 ? j : 2 * (n - 1) + (j - 2)] = 1.0;
    const std::vector<double> z = solve_tridiag(cols);
    for (std::size_t i = 0; i < 2 * n; ++i) corner_z_[i][j] = z[i];
  }

  // capacitance K = W^{-1} + U^T Z, with W^{-1} = [[0, off^{-1}], [off^{-1}, 0]]
  const Block2 off_inv = inverse(off_);
  std::array<std::array<double, 4>, 4> k{};
  k[0][2] = off_inv.a11;
  k[0][3] = off_inv.a12;
  k[1][2] = off_inv.a21;
  k[1][3] = off_inv.a22;
  k[2][0] = off_inv.a11;
  k[2][1] = off_inv.a12;
  k[3][0] = off_inv.a21;
  k[3][1] = off_inv.a22;
  for (int r = 0; r < 4; ++r) {
    const std::size_t row = r < 2 ? r : 2 * (n - 1) + (r - 2);
    for (int c = 0; c < 4; ++c) k[r][c] += corner_z_[row][c];
  }

  // LU of K with partial pivoting
  for (int r = 0; r < 4; ++r) cap_perm_[r] = r;
  for (int c = 0; c < 4; ++c) {
    int pivot = c;
    for (int r = c + 1; r < 4; ++r)
      if (std::fabs(k[r][c]) > std::fabs(k[pivot][c])) pivot = r;
    if (!(std::fabs(k[pivot][c]) > kDetFloor))
      throw std::runtime_error("singular corner capacitance");
    if (pivot != c) {
      std::swap(k[pivot], k[c]);
      std::swap(cap_perm_[pivot], cap_perm_[c]);
    }
    for (int r = c + 1; r < 4; ++r) {
      const double f = k[r][c] / k[c][c];
      k[r][c] = f;
      for (int kk = c + 1; kk < 4; ++kk) k[r][kk] -= f * k[c][kk];
    }
  }
  cap_ = k;
}

std::vector<double> CyclicBlockSolver::solve_tridiag(std::span<const double> rhs) const {
  const std::size_t n = diag_.size();
  std::vector<double> y(2 * n);
  // forward sweep: y_m = D_m^{-1} (b_m - off y_{m-1})
  double tmp[2];
  for (std::size_t m = 0; m < n; ++m) {
    tmp[0] = rhs[2 * m];
    tmp[1] = rhs[2 * m + 1];
    if (m > 0) axpy_block(off_, &y[2 * (m - 1)], tmp, -1.0);
    const Block2& p = pivot_inv_[m];
    y[2 * m] = p.a11 * tmp[0] + p.a12 * tmp[1];
    y[2 * m + 1] = p.a21 * tmp[0] + p.a22 * tmp[1];
  }
  // back substitution: x_m = y_m - D_m^{-1} off x_{m+1}
  for (std::size_t m = n - 1; m-- > 0;) {
    tmp[0] = 0.0;
    tmp[1] = 0.0;
    axpy_block(off_, &y[2 * (m + 1)], tmp);
    const Block2& p = pivot_inv_[m];
    y[2 * m] -= p.a11 * tmp[0] + p.a12 * tmp[1];
    y[2 * m + 1] -= p.a21 * tmp[0] + p.a22 * tmp[1];
  }
  return y;
}

std::vector<double> CyclicBlockSolver::solve_once(std::span<const double> rhs) const {
  const std::size_t n = diag_.size();
  if (dense_) {
    std::vector<double> x(4);
    for (int r = 0; r < 4; ++r) x[r] = rhs[dense_perm_[r]];
    for (int r = 1; r < 4; ++r)
      for (int c = 0; c < r; ++c) x[r] -= dense_lu_[4 * r + c] * x[c];
    for (int r = 3; r >= 0; --r) {
      for (int c = r + 1; c < 4; ++c) x[r] -= dense_lu_[4 * r + c] * x[c];
      x[r] /= dense_lu_[4 * r + r];
    }
    return x;
  }

  std::vector<double> y = solve_tridiag(rhs);

  // corner correction: x = y - Z K^{-1} (U^T y)
  double s[4] = {y[0], y[1], y[2 * (n - 1)], y[2 * n - 1]};
  double t[4];
  for (int r = 0; r < 4; ++r) t[r] = s[cap_perm_[r]];
  for (int r = 1; r < 4; ++r)
    for (int c = 0; c < r; ++c) t[r] -= cap_[r][c] * t[c];
  for (int r = 3; r >= 0; --r) {
    for (int c = r + 1; c < 4; ++c) t[r] -= cap_[r][c] * t[c];
    t[r] /= cap_[r][r];
  }
  for (std::size_t i = 0; i < 2 * n; ++i) {
    double corr = 0.0;
    for (int j = 0; j < 4; ++j) corr += corner_z_[i][j] * t[j];
    y[i] -= corr;
  }
  return y;
}

std::vector<double> CyclicBlockSolver::solve(std::span<const double> rhs) const {
  if (rhs.size() != 2 * diag_.size()) throw std::invalid_argument("rhs length mismatch");
  std::vector<double> x = solve_once(rhs);
  // one refinement pass
  const std::vector<double> ax = apply(x);
  std::vector<double> r(rhs.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = rhs[i] - ax[i];
  const std::vector<double> c = solve_once(r);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += c[i];
  return x;
}

std::vector<double> CyclicBlockSolver::apply(std::span<const double> x) const {
  const std::size_t n = diag_.size();
  if (x.size() != 2 * n) throw std::invalid_argument("vector length mismatch");
  std::vector<double> y(2 * n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    axpy_block(diag_[m], &x[2 * m], &y[2 * m]);
    axpy_block(off_, &x[2 * ((m + 1) % n)], &y[2 * m]);
    axpy_block(off_, &x[2 * ((m + n - 1) % n)], &y[2 * m]);
  }
  return y;
}

}  // namespace efdvd
