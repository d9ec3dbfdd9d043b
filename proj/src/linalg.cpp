#include "snet/linalg.hpp"

#include "snet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

namespace snet {

RationalMatrix RationalMatrix::identity(std::size_t dim) {
  RationalMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::from_rows(const std::vector<std::vector<Rational>>& rows) {
  RationalMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) {
      throw Error(ErrorKind::DimensionMismatch, "row " + std::to_string(i) + " has " +
                                                    std::to_string(rows[i].size()) + " entries, expected " +
                                                    std::to_string(rows.size()));
    }
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::vector<Rational> RationalMatrix::row(std::size_t i) const {
  return {entries_.begin() + static_cast<std::ptrdiff_t>(i * dim_),
          entries_.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim_)};
}

std::vector<double> RationalMatrix::to_doubles() const {
  std::vector<double> out(entries_.size());
  std::transform(entries_.begin(), entries_.end(), out.begin(), [](const Rational& q) { return q.get_d(); });
  return out;
}

namespace {

void require_same_dim(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::to_string(a.dim()) + "x" + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + "x" +
                    std::to_string(b.dim()));
  }
}

}  // namespace

RationalMatrix mat_mul(const RationalMatrix& a, const RationalMatrix& b) {
  require_same_dim(a, b);
  const std::size_t n = a.dim();
  RationalMatrix c(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += a(i, k) * b(k, j);
    }
  }
  return c;
}

RationalMatrix mat_pow(const RationalMatrix& x, unsigned exponent) {
  RationalMatrix result = RationalMatrix::identity(x.dim());
  RationalMatrix base = x;
  while (exponent > 0) {
    if (exponent & 1U) result = mat_mul(result, base);
    exponent >>= 1U;
    if (exponent > 0) base = mat_mul(base, base);
  }
  return result;
}

std::vector<Rational> vec_mul(std::span<const Rational> v, const RationalMatrix& x) {
  if (v.size() != x.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "vector of length " + std::to_string(v.size()) + " times " +
                                                  std::to_string(x.dim()) + "x" + std::to_string(x.dim()) +
                                                  " matrix");
  }
  std::vector<Rational> out(x.dim());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < x.dim(); ++j) out[j] += v[i] * x(i, j);
  }
  return out;
}

RationalMatrix transpose(const RationalMatrix& x) {
  RationalMatrix t(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i)
    for (std::size_t j = 0; j < x.dim(); ++j) t(j, i) = x(i, j);
  return t;
}

Rational determinant(const RationalMatrix& x) {
  const std::size_t n = x.dim();
  if (n == 0) return 1;
  // Scale each row to integers; det(X) = det(Z) / prod(scale).
  std::vector<std::vector<BigInt>> z(n, std::vector<BigInt>(n));
  BigInt scale_product = 1;
  for (std::size_t i = 0; i < n; ++i) {
    BigInt lcm = 1;
    for (std::size_t j = 0; j < n; ++j) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < n; ++j) z[i][j] = x(i, j).get_num() * (lcm / x(i, j).get_den());
    scale_product *= lcm;
  }

  int sign = 1;
  BigInt prev_pivot = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (z[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && z[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(z[k], z[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        z[i][j] = (z[i][j] * z[k][k] - z[i][k] * z[k][j]) / prev_pivot;  // exact division
      }
      z[i][k] = 0;
    }
    prev_pivot = z[k][k];
  }
  Rational det(BigInt(sign * z[n - 1][n - 1]), scale_product);
  det.canonicalize();
  return det;
}

bool is_invertible(const RationalMatrix& x) { return determinant(x) != 0; }

RationalMatrix inverse(const RationalMatrix& x) {
  const std::size_t n = x.dim();
  RationalMatrix a = x;
  RationalMatrix inv = RationalMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a(pivot, col) == 0) ++pivot;
    if (pivot == n) throw Error(ErrorKind::NotInvertible, "matrix is singular");
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(pivot, j), a(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    }
    const Rational p = a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) /= p;
      inv(col, j) /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a(i, col) == 0) continue;
      const Rational f = a(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

bool is_nonnegative(const RationalMatrix& x) {
  for (std::size_t i = 0; i < x.dim(); ++i)
    for (std::size_t j = 0; j < x.dim(); ++j)
      if (x(i, j) < 0) return false;
  return true;
}

namespace {

using BoolMatrix = std::vector<std::vector<bool>>;

BoolMatrix bool_mul(const BoolMatrix& a, const BoolMatrix& b) {
  const std::size_t n = a.size();
  BoolMatrix c(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (a[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (b[k][j]) c[i][j] = true;
  return c;
}

}  // namespace

bool is_primitive(const RationalMatrix& x) {
  const std::size_t n = x.dim();
  if (n == 0 || !is_nonnegative(x)) return false;
  BoolMatrix base(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) base[i][j] = x(i, j) > 0;

  // Wielandt: a primitive matrix has X^k > 0 for k = (n-1)^2 + 1.
  std::size_t exponent = (n - 1) * (n - 1) + 1;
  BoolMatrix result;
  bool have_result = false;
  while (exponent > 0) {
    if (exponent & 1U) {
      result = have_result ? bool_mul(result, base) : base;
      have_result = true;
    }
    exponent >>= 1U;
    if (exponent > 0) base = bool_mul(base, base);
  }
  for (const auto& r : result)
    for (bool b : r)
      if (!b) return false;
  return true;
}

std::vector<Rational> row_sums(const RationalMatrix& x) {
  std::vector<Rational> sums(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i)
    for (std::size_t j = 0; j < x.dim(); ++j) sums[i] += x(i, j);
  return sums;
}

namespace {

SpectralResult power_iterate(const std::vector<double>& a, std::size_t n, double tol, std::size_t max_iter) {
  std::vector<double> v(n, 1.0 / static_cast<double>(n));
  std::vector<double> y(n);
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t iter = 1; iter <= max_iter; ++iter) {
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) y[j] += v[i] * a[i * n + j];
    // v is nonnegative with ||v||_1 = 1, so ||vX||_1 is the growth estimate.
    const double est = std::accumulate(y.begin(), y.end(), 0.0);
    double residual = 0.0;
    for (std::size_t j = 0; j < n; ++j) residual += std::abs(y[j] - est * v[j]);
    const double scale = std::max(1.0, est);
    if (std::abs(est - prev) < tol * scale && residual <= tol * scale) {
      return {est, v, iter, residual};
    }
    prev = est;
    for (std::size_t j = 0; j < n; ++j) v[j] = y[j] / est;
  }
  throw Error(ErrorKind::NoConvergence, "power iteration did not converge in " + std::to_string(max_iter) +
                                            " iterations");
}

}  // namespace

SpectralResult spectral_radius(const RationalMatrix& x, double tol, std::size_t max_iter) {
  if (!is_primitive(x)) throw Error(ErrorKind::NotPrimitive, "spectral_radius requires a primitive matrix");
  return power_iterate(x.to_doubles(), x.dim(), tol, max_iter);
}

double perron_root(const RationalMatrix& x, double tol, std::size_t max_iter) {
  if (!is_nonnegative(x)) throw Error(ErrorKind::InvalidArgument, "perron_root requires a nonnegative matrix");
  const std::size_t n = x.dim();
  if (n == 0) return 0.0;

  // Tarjan's SCC on the support graph.
  std::vector<int> index(n, -1), low(n, 0), component(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  int counter = 0;
  int components = 0;
  std::function<void(std::size_t)> visit = [&](std::size_t u) {
    index[u] = low[u] = counter++;
    stack.push_back(u);
    on_stack[u] = true;
    for (std::size_t v = 0; v < n; ++v) {
      if (x(u, v) == 0) continue;
      if (index[v] < 0) {
        visit(v);
        low[u] = std::min(low[u], low[v]);
      } else if (on_stack[v]) {
        low[u] = std::min(low[u], index[v]);
      }
    }
    if (low[u] == index[u]) {
      std::size_t w = 0;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        component[w] = components;
      } while (w != u);
      ++components;
    }
  };
  for (std::size_t u = 0; u < n; ++u)
    if (index[u] < 0) visit(u);

  double best = 0.0;
  for (int c = 0; c < components; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t u = 0; u < n; ++u)
      if (component[u] == c) members.push_back(u);
    if (members.size() == 1) {
      best = std::max(best, x(members[0], members[0]).get_d());
      continue;
    }
    const std::size_t m = members.size();
    std::vector<double> shifted(m * m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) shifted[i * m + j] = x(members[i], members[j]).get_d();
      shifted[i * m + i] += 1.0;
    }
    best = std::max(best, power_iterate(shifted, m, tol, max_iter).rho - 1.0);
  }
  return best;
}

std::pair<double, double> collatz_bounds(const RationalMatrix& x, std::span<const double> w) {
  if (w.size() != x.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "vector of length " + std::to_string(w.size()) + " for " +
                                                  std::to_string(x.dim()) + "x" + std::to_string(x.dim()) +
                                                  " matrix");
  }
  if (std::any_of(w.begin(), w.end(), [](double e) { return !(e > 0.0); })) {
    throw Error(ErrorKind::NonpositiveVector, "collatz_bounds requires a positive vector");
  }
  const auto a = x.to_doubles();
  const std::size_t n = x.dim();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double xw = 0.0;
    for (std::size_t j = 0; j < n; ++j) xw += a[i * n + j] * w[j];
    lo = std::min(lo, xw / w[i]);
    hi = std::max(hi, xw / w[i]);
  }
  return {lo, hi};
}

}  // namespace snet
