#include "kz/exactla.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kz {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
    if (n % d == 0) return n == d;
  }
  for (std::uint64_t d = 17; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

Field::Field(std::uint32_t p) : p_(p) {
  if (!is_prime(p)) throw std::invalid_argument("field modulus is not prime: " + std::to_string(p));
  // Accumulations stay below 2^52 so the rounding trick in reduce() is exact.
  const double bound = 4503599627370496.0;  // 2^52
  const double sq = double(p - 1) * double(p - 1);
  double len = std::floor((bound - double(p)) / sq);
  inner_len_ = len > double(1u << 30) ? (1u << 30) : std::size_t(len);
}

Scalar Field::inv(Scalar a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  std::int64_t t = 0, nt = 1, r = p_, nr = a;
  while (nr != 0) {
    std::int64_t q = r / nr;
    std::int64_t tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (t < 0) t += p_;
  return Scalar(t);
}

Scalar Field::from_int(std::int64_t v) const {
  std::int64_t m = v % std::int64_t(p_);
  if (m < 0) m += p_;
  return Scalar(m);
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<Scalar>>& rows, std::size_t cols) {
  std::size_t c = rows.empty() ? cols : rows.front().size();
  Matrix m(rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) throw std::invalid_argument("ragged matrix rows");
    std::copy(rows[i].begin(), rows[i].end(), m.row(i));
  }
  return m;
}

bool Matrix::is_zero() const {
  return std::all_of(a.begin(), a.end(), [](Scalar x) { return x == 0; });
}

std::vector<Scalar> Matrix::col_vec(std::size_t j) const {
  std::vector<Scalar> v(rows);
  for (std::size_t i = 0; i < rows; ++i) v[i] = (*this)(i, j);
  return v;
}

namespace detail {
EngineConfig& engine_config() {
  static EngineConfig cfg;
  return cfg;
}
}  // namespace detail

namespace {

// ---------------------------------------------------------------- double engine

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Stride = Eigen::OuterStride<>;
using ConstMap = Eigen::Map<const RowMat, 0, Stride>;
using MutMap = Eigen::Map<RowMat, 0, Stride>;

struct DMat {
  std::size_t r = 0, c = 0;
  std::vector<double> v;
  DMat() = default;
  DMat(std::size_t rr, std::size_t cc) : r(rr), c(cc), v(rr * cc, 0.0) {}
  double* row(std::size_t i) { return v.data() + i * c; }
  const double* row(std::size_t i) const { return v.data() + i * c; }
};

struct Reducer {
  double p, pinv;
  explicit Reducer(std::uint32_t prime) : p(double(prime)), pinv(1.0 / double(prime)) {}
  // Valid for |x| <= 2^52.
  [[nodiscard]] double operator()(double x) const {
    constexpr double magic = 6755399441055744.0;
    double t = x * pinv + magic;
    double q = t - magic;
    double r = x - q * p;
    if (r < 0) r += p;
    if (r >= p) r -= p;
    return r;
  }
  void span(double* x, std::size_t n) const {
    constexpr double magic = 6755399441055744.0;
    const double pp = p, pi = pinv;
    for (std::size_t k = 0; k < n; ++k) {
      double t = x[k] * pi + magic;
      double q = t - magic;
      double r = x[k] - q * pp;
      r += (r < 0) ? pp : 0.0;
      r -= (r >= pp) ? pp : 0.0;
      x[k] = r;
    }
  }
};

DMat to_dmat(const Matrix& m) {
  DMat d(m.rows, m.cols);
  for (std::size_t k = 0; k < m.a.size(); ++k) d.v[k] = double(m.a[k]);
  return d;
}

Matrix to_matrix(const DMat& d) {
  Matrix m(d.r, d.c);
  for (std::size_t k = 0; k < d.v.size(); ++k) m.a[k] = Scalar(d.v[k]);
  return m;
}

// C[rows x n] -= A[rows x inner] * B[inner x n], all reduced on entry, reduced on exit.
void gemm_sub(const Field& f, const Reducer& red, std::size_t rows, std::size_t n, std::size_t inner, const double* A,
              std::size_t lda, const double* B, std::size_t ldb, double* C, std::size_t ldc) {
  if (rows == 0 || n == 0 || inner == 0) return;
  const std::size_t chunk = f.exact_inner_length();
  for (std::size_t k0 = 0; k0 < inner; k0 += chunk) {
    std::size_t kk = std::min(chunk, inner - k0);
    ConstMap a(A + k0, Eigen::Index(rows), Eigen::Index(kk), Stride(Eigen::Index(lda)));
    ConstMap b(B + k0 * ldb, Eigen::Index(kk), Eigen::Index(n), Stride(Eigen::Index(ldb)));
    MutMap c(C, Eigen::Index(rows), Eigen::Index(n), Stride(Eigen::Index(ldc)));
    c.noalias() -= a * b;
    for (std::size_t i = 0; i < rows; ++i) red.span(C + i * ldc, n);
  }
}

struct Echelon {
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
};

// In-place forward elimination. On exit rows [0, rank) are an echelon basis of the row space
// (entries reduced, pivots nonzero, not normalized); remaining rows are zero.
Echelon forward_eliminate(const Field& f, DMat& W, std::size_t stop_rank = std::size_t(-1)) {
  const Reducer red(f.p());
  const std::size_t m = W.r, n = W.c;
  const std::size_t w = std::max<std::size_t>(1, std::min<std::size_t>(128, f.exact_inner_length()));
  Echelon out;
  std::size_t r = 0;
  std::vector<double> l21;
  std::vector<double> lvec;
  for (std::size_t c0 = 0; c0 < n && r < m && r < stop_rank; c0 += w) {
    const std::size_t c1 = std::min(n, c0 + w);
    const std::size_t k0 = r;
    std::vector<std::size_t> pc;
    for (std::size_t c = c0; c < c1 && r < m; ++c) {
      std::size_t piv = m;
      for (std::size_t i = r; i < m; ++i) {
        double& x = W.row(i)[c];
        x = red(x);
        if (x != 0.0 && piv == m) piv = i;
      }
      if (piv == m) continue;
      if (piv != r) std::swap_ranges(W.row(piv), W.row(piv) + n, W.row(r));
      double* pr = W.row(r);
      red.span(pr + c, c1 - c);
      const Scalar inv = f.inv(Scalar(pr[c]));
      for (std::size_t i = r + 1; i < m; ++i) {
        double* ri = W.row(i);
        double a = ri[c];
        if (a == 0.0) continue;
        double fm = double(f.mul(Scalar(a), inv));
        ri[c] = fm;
        for (std::size_t cc = c + 1; cc < c1; ++cc) ri[cc] -= fm * pr[cc];
      }
      pc.push_back(c);
      ++r;
    }
    const std::size_t k = r - k0;
    if (k == 0) continue;
    // Entries of remaining rows in the panel's non-pivot columns are zero; reduce the rest of the panel.
    for (std::size_t i = k0; i < m; ++i) red.span(W.row(i) + c0, c1 - c0);
    if (c1 < n) {
      const std::size_t nt = n - c1;
      lvec.resize(k);
      for (std::size_t t = 1; t < k; ++t) {
        for (std::size_t s = 0; s < t; ++s) lvec[s] = W.row(k0 + t)[pc[s]];
        ConstMap u(W.row(k0) + c1, Eigen::Index(t), Eigen::Index(nt), Stride(Eigen::Index(n)));
        Eigen::Map<const Eigen::RowVectorXd> l(lvec.data(), Eigen::Index(t));
        Eigen::Map<Eigen::RowVectorXd> y(W.row(k0 + t) + c1, Eigen::Index(nt));
        y.noalias() -= l * u;
        red.span(W.row(k0 + t) + c1, nt);
      }
      const std::size_t below = m - r;
      if (below > 0) {
        l21.assign(below * k, 0.0);
        for (std::size_t i = 0; i < below; ++i)
          for (std::size_t s = 0; s < k; ++s) l21[i * k + s] = W.row(r + i)[pc[s]];
        gemm_sub(f, red, below, nt, k, l21.data(), k, W.row(k0) + c1, n, W.row(r) + c1, n);
      }
    }
    // Clear stored multipliers.
    for (std::size_t t = 0; t < k; ++t)
      for (std::size_t s = 0; s < t; ++s) W.row(k0 + t)[pc[s]] = 0.0;
    for (std::size_t i = r; i < m; ++i)
      for (std::size_t s = 0; s < k; ++s) W.row(i)[pc[s]] = 0.0;
    out.pivots.insert(out.pivots.end(), pc.begin(), pc.end());
  }
  out.rank = r;
  return out;
}

// Solves U X = X in place, U unit upper triangular (rank x rank), X rank x nf.
void unit_upper_solve(const Field& f, const Reducer& red, const DMat& U, DMat& X, std::size_t lo, std::size_t hi) {
  const std::size_t nf = X.c;
  if (hi - lo <= 16) {
    for (std::size_t t = hi; t-- > lo;) {
      double* xt = X.row(t);
      for (std::size_t s = t + 1; s < hi; ++s) {
        double u = U.row(t)[s];
        if (u == 0.0) continue;
        const double* xs = X.row(s);
        for (std::size_t q = 0; q < nf; ++q) xt[q] -= u * xs[q];
      }
      red.span(xt, nf);
    }
    return;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  unit_upper_solve(f, red, U, X, mid, hi);
  gemm_sub(f, red, mid - lo, nf, hi - mid, U.row(lo) + mid, U.c, X.row(mid), nf, X.row(lo), nf);
  unit_upper_solve(f, red, U, X, lo, mid);
}

struct BlasRref {
  std::vector<std::size_t> pivots;
  std::vector<std::size_t> free;
  DMat N;  // rank x free: RREF restricted to free columns
};

BlasRref blas_rref(const Field& f, DMat W) {
  const Reducer red(f.p());
  Echelon ech = forward_eliminate(f, W);
  BlasRref out;
  out.pivots = ech.pivots;
  const std::size_t n = W.c, rk = ech.rank;
  std::vector<char> is_piv(n, 0);
  for (auto c : ech.pivots) is_piv[c] = 1;
  for (std::size_t c = 0; c < n; ++c)
    if (!is_piv[c]) out.free.push_back(c);
  // Normalize pivot rows, then split into pivot block U and free block N.
  DMat U(rk, rk);
  out.N = DMat(rk, out.free.size());
  for (std::size_t t = 0; t < rk; ++t) {
    double* row = W.row(t);
    const Scalar inv = f.inv(Scalar(row[ech.pivots[t]]));
    for (std::size_t s = t; s < rk; ++s) U.row(t)[s] = double(f.mul(Scalar(row[ech.pivots[s]]), inv));
    double* nr = out.N.row(t);
    for (std::size_t q = 0; q < out.free.size(); ++q) nr[q] = double(f.mul(Scalar(row[out.free[q]]), inv));
  }
  W = DMat();
  if (rk > 0 && !out.free.empty()) unit_upper_solve(f, red, U, out.N, 0, rk);
  return out;
}

bool use_blas(const Field& f, std::size_t entries) {
  const auto& cfg = detail::engine_config();
  if (cfg.force_scalar || !f.blas_capable()) return false;
  if (cfg.force_blas) return true;
  return entries >= cfg.blas_min_entries;
}

// ---------------------------------------------------------------- scalar engine

RrefResult scalar_rref(const Field& f, Matrix m) {
  const std::uint64_t p = f.p();
  std::vector<std::size_t> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
    std::size_t sel = m.rows;
    for (std::size_t i = r; i < m.rows; ++i)
      if (m(i, c) != 0) {
        sel = i;
        break;
      }
    if (sel == m.rows) continue;
    if (sel != r) std::swap_ranges(m.row(sel), m.row(sel) + m.cols, m.row(r));
    Scalar* pr = m.row(r);
    const Scalar inv = f.inv(pr[c]);
    for (std::size_t k = c; k < m.cols; ++k) pr[k] = Scalar((std::uint64_t(pr[k]) * inv) % p);
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == r) continue;
      Scalar* ri = m.row(i);
      Scalar a = ri[c];
      if (a == 0) continue;
      const std::uint64_t na = p - a;
      for (std::size_t k = c; k < m.cols; ++k) {
        if (pr[k] != 0) ri[k] = Scalar((ri[k] + na * pr[k]) % p);
      }
    }
    piv.push_back(c);
    ++r;
  }
  m.rows = r;
  m.a.resize(r * m.cols);
  return {std::move(m), std::move(piv)};
}

// Shared kernel assembly from pivot data; `entry(t, q)` gives RREF(t, free[q]).
template <class Entry>
Matrix assemble_kernel_rows(const Field& f, std::size_t n, const std::vector<std::size_t>& pivots,
                            const std::vector<std::size_t>& free, Entry entry) {
  Matrix k(free.size(), n);
  for (std::size_t q = 0; q < free.size(); ++q) {
    Scalar* row = k.row(q);
    row[free[q]] = 1;
    for (std::size_t t = 0; t < pivots.size(); ++t) row[pivots[t]] = f.neg(entry(t, q));
  }
  return k;
}

std::vector<std::size_t> complement(std::size_t n, const std::vector<std::size_t>& piv) {
  std::vector<char> is(n, 0);
  for (auto c : piv) is[c] = 1;
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < n; ++c)
    if (!is[c]) out.push_back(c);
  return out;
}

std::size_t dense_rank(const Field& f, const Matrix& m) {
  if (m.rows == 0 || m.cols == 0) return 0;
  if (use_blas(f, m.rows * m.cols)) {
    // Eliminate along the longer dimension.
    DMat W = m.rows <= m.cols ? to_dmat(m) : to_dmat(transpose(m));
    return forward_eliminate(f, W).rank;
  }
  return scalar_rref(f, m).pivots.size();
}

}  // namespace

// ---------------------------------------------------------------- public API

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols, m.rows);
  constexpr std::size_t B = 64;
  for (std::size_t i0 = 0; i0 < m.rows; i0 += B)
    for (std::size_t j0 = 0; j0 < m.cols; j0 += B)
      for (std::size_t i = i0; i < std::min(m.rows, i0 + B); ++i)
        for (std::size_t j = j0; j < std::min(m.cols, j0 + B); ++j) t.a[j * m.rows + i] = m.a[i * m.cols + j];
  return t;
}

Matrix add(const Field& f, const Matrix& a, const Matrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument("add: shape mismatch");
  Matrix c(a.rows, a.cols);
  for (std::size_t k = 0; k < a.a.size(); ++k) c.a[k] = f.add(a.a[k], b.a[k]);
  return c;
}

Matrix sub(const Field& f, const Matrix& a, const Matrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument("sub: shape mismatch");
  Matrix c(a.rows, a.cols);
  for (std::size_t k = 0; k < a.a.size(); ++k) c.a[k] = f.sub(a.a[k], b.a[k]);
  return c;
}

Matrix scale(const Field& f, const Matrix& a, Scalar s) {
  Matrix c(a.rows, a.cols);
  for (std::size_t k = 0; k < a.a.size(); ++k) c.a[k] = f.mul(a.a[k], s);
  return c;
}

Matrix mul(const Field& f, const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("mul: shape mismatch");
  const std::size_t m = a.rows, n = b.cols, inner = a.cols;
  Matrix c(m, n);
  if (m == 0 || n == 0 || inner == 0) return c;
  const std::uint64_t p = f.p();
  if (!use_blas(f, std::max(m, n) * inner) || std::min({m, n, inner}) < 16) {
    const std::uint64_t sq = (p - 1) * (p - 1);
    const std::uint64_t max_terms = sq == 0 ? ~0ull : (~0ull - p) / sq;
    std::vector<std::uint64_t> acc(n);
    for (std::size_t i = 0; i < m; ++i) {
      std::fill(acc.begin(), acc.end(), 0);
      std::uint64_t terms = 0;
      const Scalar* ar = a.row(i);
      for (std::size_t k = 0; k < inner; ++k) {
        const std::uint64_t x = ar[k];
        if (x == 0) continue;
        const Scalar* br = b.row(k);
        for (std::size_t j = 0; j < n; ++j) acc[j] += x * br[j];
        if (++terms >= max_terms) {
          for (auto& v : acc) v %= p;
          terms = 1;
        }
      }
      Scalar* cr = c.row(i);
      for (std::size_t j = 0; j < n; ++j) cr[j] = Scalar(acc[j] % p);
    }
    return c;
  }
  // Split the inner index: rows of b with few nonzeros are applied sparsely.
  std::vector<std::size_t> dense;
  std::vector<std::vector<std::pair<std::size_t, Scalar>>> sparse_nz;
  std::vector<std::size_t> sparse;
  const std::size_t thresh = std::max<std::size_t>(1, n / 32);
  for (std::size_t k = 0; k < inner; ++k) {
    const Scalar* br = b.row(k);
    std::vector<std::pair<std::size_t, Scalar>> nz;
    for (std::size_t j = 0; j < n && nz.size() <= thresh; ++j)
      if (br[j] != 0) nz.emplace_back(j, br[j]);
    if (nz.size() <= thresh) {
      sparse.push_back(k);
      sparse_nz.push_back(std::move(nz));
    } else {
      dense.push_back(k);
    }
  }
  const Reducer red(f.p());
  DMat C(m, n);
  if (!dense.empty()) {
    DMat A(m, dense.size()), B(dense.size(), n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t q = 0; q < dense.size(); ++q) A.row(i)[q] = double(a(i, dense[q]));
    for (std::size_t q = 0; q < dense.size(); ++q)
      for (std::size_t j = 0; j < n; ++j) B.row(q)[j] = double(f.neg(b(dense[q], j)));
    // C -= A * (-B)
    gemm_sub(f, red, m, n, dense.size(), A.v.data(), A.c, B.v.data(), B.c, C.v.data(), C.c);
  }
  for (std::size_t i = 0; i < m; ++i) {
    double* cr = C.row(i);
    for (std::size_t s = 0; s < sparse.size(); ++s) {
      const std::uint64_t x = a(i, sparse[s]);
      if (x == 0) continue;
      for (const auto& [j, v] : sparse_nz[s]) cr[j] = double((std::uint64_t(cr[j]) + x * v) % p);
    }
  }
  return to_matrix(C);
}

std::vector<Scalar> mul_vec(const Field& f, const Matrix& a, const std::vector<Scalar>& v) {
  if (a.cols != v.size()) throw std::invalid_argument("mul_vec: shape mismatch");
  std::vector<Scalar> out(a.rows);
  const std::uint64_t p = f.p();
  for (std::size_t i = 0; i < a.rows; ++i) {
    std::uint64_t acc = 0;
    const Scalar* r = a.row(i);
    for (std::size_t k = 0; k < a.cols; ++k) acc = (acc + std::uint64_t(r[k]) * v[k]) % p;
    out[i] = Scalar(acc);
  }
  return out;
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows != b.rows) throw std::invalid_argument("hstack: row mismatch");
  Matrix c(a.rows, a.cols + b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    std::copy(a.row(i), a.row(i) + a.cols, c.row(i));
    std::copy(b.row(i), b.row(i) + b.cols, c.row(i) + a.cols);
  }
  return c;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.rows == 0) return b;
  if (b.rows == 0) return a;
  if (a.cols != b.cols) throw std::invalid_argument("vstack: column mismatch");
  Matrix c(a.rows + b.rows, a.cols);
  std::copy(a.a.begin(), a.a.end(), c.a.begin());
  std::copy(b.a.begin(), b.a.end(), c.a.begin() + std::ptrdiff_t(a.a.size()));
  return c;
}

Matrix select_rows(const Matrix& m, const std::vector<std::size_t>& idx) {
  Matrix out(idx.size(), m.cols);
  for (std::size_t i = 0; i < idx.size(); ++i) std::copy(m.row(idx[i]), m.row(idx[i]) + m.cols, out.row(i));
  return out;
}

Matrix select_cols(const Matrix& m, const std::vector<std::size_t>& idx) {
  Matrix out(m.rows, idx.size());
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = m(i, idx[j]);
  return out;
}

RrefResult rref(const Field& f, const Matrix& m) {
  if (!use_blas(f, m.rows * m.cols) || m.rows == 0 || m.cols == 0) {
    RrefResult r = scalar_rref(f, m);
    Matrix full(m.rows, m.cols);
    std::copy(r.matrix.a.begin(), r.matrix.a.end(), full.a.begin());
    return {std::move(full), std::move(r.pivots)};
  }
  BlasRref b = blas_rref(f, to_dmat(m));
  Matrix full(m.rows, m.cols);
  for (std::size_t t = 0; t < b.pivots.size(); ++t) {
    full(t, b.pivots[t]) = 1;
    for (std::size_t q = 0; q < b.free.size(); ++q) full(t, b.free[q]) = Scalar(b.N.row(t)[q]);
  }
  return {std::move(full), std::move(b.pivots)};
}

RrefResult row_space(const Field& f, const Matrix& rows) {
  RrefResult r = rref(f, rows);
  r.matrix.rows = r.pivots.size();
  r.matrix.a.resize(r.matrix.rows * r.matrix.cols);
  return r;
}

Matrix kernel_rows(const Field& f, const Matrix& m) {
  const std::size_t n = m.cols;
  if (m.rows == 0 || n == 0) return Matrix::identity(n);
  if (!use_blas(f, m.rows * n)) {
    RrefResult r = scalar_rref(f, m);
    auto free = complement(n, r.pivots);
    return assemble_kernel_rows(f, n, r.pivots, free, [&](std::size_t t, std::size_t q) { return r.matrix(t, free[q]); });
  }
  BlasRref b = blas_rref(f, to_dmat(m));
  return assemble_kernel_rows(f, n, b.pivots, b.free,
                              [&](std::size_t t, std::size_t q) { return Scalar(b.N.row(t)[q]); });
}

Matrix kernel_basis(const Field& f, const Matrix& m) { return transpose(kernel_rows(f, m)); }

std::size_t rank(const Field& f, const Matrix& m) {
  const std::size_t R = m.rows, C = m.cols;
  if (R == 0 || C == 0) return 0;
  if (R * C < (1u << 16)) return dense_rank(f, m);
  // Peel rows and columns that own a singleton line; each such line adds one to the rank.
  std::vector<char> ralive(R, 1), calive(C, 1);
  std::vector<std::size_t> rnz(R, 0), cnz(C, 0);
  for (std::size_t i = 0; i < R; ++i) {
    const Scalar* row = m.row(i);
    for (std::size_t j = 0; j < C; ++j)
      if (row[j] != 0) {
        ++rnz[i];
        ++cnz[j];
      }
  }
  std::size_t extra = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t j = 0; j < C; ++j) {
      if (!calive[j] || cnz[j] != 1) continue;
      std::size_t i = 0;
      while (!(ralive[i] && m(i, j) != 0)) ++i;
      ralive[i] = 0;
      ++extra;
      changed = true;
      const Scalar* row = m.row(i);
      for (std::size_t jj = 0; jj < C; ++jj)
        if (calive[jj] && row[jj] != 0) --cnz[jj];
    }
    for (std::size_t i = 0; i < R; ++i) {
      if (!ralive[i] || rnz[i] != 1) continue;
      std::size_t j = 0;
      const Scalar* row = m.row(i);
      while (!(calive[j] && row[j] != 0)) ++j;
      calive[j] = 0;
      ++extra;
      changed = true;
      for (std::size_t ii = 0; ii < R; ++ii)
        if (ralive[ii] && m(ii, j) != 0) --rnz[ii];
    }
    for (std::size_t j = 0; j < C; ++j)
      if (calive[j] && cnz[j] == 0) calive[j] = 0;
    for (std::size_t i = 0; i < R; ++i)
      if (ralive[i] && rnz[i] == 0) ralive[i] = 0;
  }
  std::vector<std::size_t> ri, ci;
  for (std::size_t i = 0; i < R; ++i)
    if (ralive[i]) ri.push_back(i);
  for (std::size_t j = 0; j < C; ++j)
    if (calive[j]) ci.push_back(j);
  if (ri.empty() || ci.empty()) return extra;
  if (ri.size() == R && ci.size() == C) return dense_rank(f, m);
  Matrix sub(ri.size(), ci.size());
  for (std::size_t a = 0; a < ri.size(); ++a)
    for (std::size_t b = 0; b < ci.size(); ++b) sub(a, b) = m(ri[a], ci[b]);
  return extra + dense_rank(f, sub);
}

std::optional<std::vector<Scalar>> solve(const Field& f, const Matrix& m, const std::vector<Scalar>& b) {
  if (b.size() != m.rows) throw std::invalid_argument("solve: rhs length mismatch");
  Matrix aug(m.rows, m.cols + 1);
  for (std::size_t i = 0; i < m.rows; ++i) {
    std::copy(m.row(i), m.row(i) + m.cols, aug.row(i));
    aug(i, m.cols) = b[i];
  }
  RrefResult r = rref(f, aug);
  std::vector<Scalar> x(m.cols, 0);
  for (std::size_t t = 0; t < r.pivots.size(); ++t) {
    if (r.pivots[t] == m.cols) return std::nullopt;
    x[r.pivots[t]] = r.matrix(t, m.cols);
  }
  return x;
}

bool is_surjective(const Field& f, const Matrix& m) { return rank(f, m) == m.rows; }

std::optional<Matrix> inverse(const Field& f, const Matrix& m) {
  if (m.rows != m.cols) throw std::invalid_argument("inverse: matrix not square");
  const std::size_t n = m.rows;
  auto r = rref(f, hstack(m, Matrix::identity(n)));
  if (r.pivots.size() < n || (n > 0 && r.pivots[n - 1] >= n)) return std::nullopt;
  std::vector<std::size_t> right(n);
  std::iota(right.begin(), right.end(), n);
  return select_cols(r.matrix, right);
}

std::optional<Matrix> right_inverse(const Field& f, const Matrix& m) {
  auto piv = rref(f, m).pivots;
  if (piv.size() != m.rows) return std::nullopt;
  auto inv = inverse(f, select_cols(m, piv));
  Matrix x(m.cols, m.rows);
  for (std::size_t i = 0; i < piv.size(); ++i)
    for (std::size_t j = 0; j < m.rows; ++j) x(piv[i], j) = (*inv)(i, j);
  return x;
}

Matrix coordinates_in(const Field& f, const RrefResult& basis, const Matrix& vecs) {
  const std::size_t k = basis.pivots.size();
  if (vecs.rows == 0) return Matrix(0, k);
  if (vecs.cols != basis.matrix.cols) throw std::invalid_argument("coordinates_in: length mismatch");
  Matrix coords(vecs.rows, k);
  for (std::size_t i = 0; i < vecs.rows; ++i)
    for (std::size_t t = 0; t < k; ++t) coords(i, t) = vecs(i, basis.pivots[t]);
  Matrix basis_rows = basis.matrix;
  basis_rows.rows = k;
  basis_rows.a.resize(k * basis_rows.cols);
  Matrix recon = k == 0 ? Matrix(vecs.rows, vecs.cols) : mul(f, coords, basis_rows);
  if (recon != vecs) throw std::domain_error("vector outside the span of the basis");
  return coords;
}

}  // namespace kz
