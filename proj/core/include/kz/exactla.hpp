#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kz {

using Scalar = std::uint32_t;

/// Prime field F_P. Scalars are residues in [0, P).
class Field {
 public:
  static constexpr std::uint32_t kDefaultPrime = 32003;

  explicit Field(std::uint32_t p = kDefaultPrime);

  [[nodiscard]] std::uint32_t p() const { return p_; }

  [[nodiscard]] Scalar add(Scalar a, Scalar b) const {
    std::uint64_t s = std::uint64_t(a) + b;
    return Scalar(s >= p_ ? s - p_ : s);
  }
  [[nodiscard]] Scalar sub(Scalar a, Scalar b) const { return a >= b ? a - b : Scalar(std::uint64_t(a) + p_ - b); }
  [[nodiscard]] Scalar neg(Scalar a) const { return a == 0 ? 0 : p_ - a; }
  [[nodiscard]] Scalar mul(Scalar a, Scalar b) const { return Scalar((std::uint64_t(a) * b) % p_); }
  [[nodiscard]] Scalar inv(Scalar a) const;
  [[nodiscard]] Scalar from_int(std::int64_t v) const;
  /// Symmetric representative in (-P/2, P/2].
  [[nodiscard]] std::int64_t to_signed(Scalar a) const { return a > p_ / 2 ? std::int64_t(a) - p_ : std::int64_t(a); }

  /// Longest inner dimension a double-precision dot product can accumulate exactly.
  [[nodiscard]] std::size_t exact_inner_length() const { return inner_len_; }
  [[nodiscard]] bool blas_capable() const { return inner_len_ >= 64; }

  bool operator==(const Field& o) const { return p_ == o.p_; }

 private:
  std::uint32_t p_;
  std::size_t inner_len_;
};

[[nodiscard]] bool is_prime(std::uint64_t n);

/// Dense row-major matrix of field residues.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Scalar> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<std::vector<Scalar>>& rows, std::size_t cols = 0);

  Scalar& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  Scalar operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
  Scalar* row(std::size_t i) { return a.data() + i * cols; }
  const Scalar* row(std::size_t i) const { return a.data() + i * cols; }

  [[nodiscard]] bool is_zero() const;
  [[nodiscard]] std::vector<Scalar> row_vec(std::size_t i) const { return {row(i), row(i) + cols}; }
  [[nodiscard]] std::vector<Scalar> col_vec(std::size_t j) const;

  bool operator==(const Matrix& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
  bool operator!=(const Matrix& o) const { return !(*this == o); }
};

struct RrefResult {
  Matrix matrix;
  std::vector<std::size_t> pivots;
};

[[nodiscard]] Matrix transpose(const Matrix& m);
[[nodiscard]] Matrix mul(const Field& f, const Matrix& a, const Matrix& b);
[[nodiscard]] Matrix add(const Field& f, const Matrix& a, const Matrix& b);
[[nodiscard]] Matrix sub(const Field& f, const Matrix& a, const Matrix& b);
[[nodiscard]] Matrix scale(const Field& f, const Matrix& a, Scalar c);
[[nodiscard]] std::vector<Scalar> mul_vec(const Field& f, const Matrix& a, const std::vector<Scalar>& v);
[[nodiscard]] Matrix hstack(const Matrix& a, const Matrix& b);
[[nodiscard]] Matrix vstack(const Matrix& a, const Matrix& b);
[[nodiscard]] Matrix select_rows(const Matrix& m, const std::vector<std::size_t>& idx);
[[nodiscard]] Matrix select_cols(const Matrix& m, const std::vector<std::size_t>& idx);

/// Reduced row echelon form with its pivot columns (strictly increasing).
[[nodiscard]] RrefResult rref(const Field& f, const Matrix& m);
/// Columns form a basis of {v : m v = 0}; free variables in increasing order are set to 1.
[[nodiscard]] Matrix kernel_basis(const Field& f, const Matrix& m);
/// Same basis as kernel_basis, stored one vector per row.
[[nodiscard]] Matrix kernel_rows(const Field& f, const Matrix& m);
[[nodiscard]] std::size_t rank(const Field& f, const Matrix& m);
/// Some solution of m x = b with free variables 0, or nullopt when inconsistent.
[[nodiscard]] std::optional<std::vector<Scalar>> solve(const Field& f, const Matrix& m, const std::vector<Scalar>& b);
[[nodiscard]] bool is_surjective(const Field& f, const Matrix& m);
/// Some X with m X = I (pivot columns of m carry the inverse), or nullopt when m is not surjective.
[[nodiscard]] std::optional<Matrix> right_inverse(const Field& f, const Matrix& m);
[[nodiscard]] std::optional<Matrix> inverse(const Field& f, const Matrix& m);

/// Row space basis in reduced echelon form (zero rows dropped).
[[nodiscard]] RrefResult row_space(const Field& f, const Matrix& rows);

/// Coordinates of each row of `vecs` in the basis given by `basis` (an RREF row basis).
/// Throws when some vector lies outside the span.
[[nodiscard]] Matrix coordinates_in(const Field& f, const RrefResult& basis, const Matrix& vecs);

namespace detail {
/// Thresholds controlling when the BLAS path is used (exposed for tests).
struct EngineConfig {
  std::size_t blas_min_entries = 1u << 14;
  bool force_scalar = false;
  bool force_blas = false;
};
EngineConfig& engine_config();
}  // namespace detail

}  // namespace kz
