#pragma once

#include <random>
#include <utility>
#include <vector>

#include "kz/algebra.hpp"

namespace kz {

/// Multiplication table of a short module: x_l u_n = sum_h C((l,n), h) v_h.
/// Row (l,n) sits at index l*p + n (zero-based), which is the lexicographic order on pairs.
struct ShortTable {
  std::uint32_t prime = Field::kDefaultPrime;
  int e = 0, p = 0, q = 0;
  Matrix C;

  [[nodiscard]] std::size_t row(int l, int n) const { return std::size_t(l) * std::size_t(p) + std::size_t(n); }
  [[nodiscard]] Field field() const { return Field(prime); }
  bool operator==(const ShortTable& o) const { return prime == o.prime && e == o.e && p == o.p && q == o.q && C == o.C; }
};

/// q pairs (l, n), zero-based.
struct RowSelector {
  std::vector<std::pair<int, int>> s;
};

/// ep x (ep - q) matrix of linear relations sum_(l,n) b_{(l,n),h'} x_l u_n, rows in table order.
struct PresentationMatrix {
  int e = 0, p = 0;
  Matrix B;
};

ShortTable random_table(int e, int p, int q, std::uint32_t prime, std::mt19937_64& rng);

GradedModule table_to_module(const GradedAlgebra& A, const ShortTable& T);
ShortTable module_to_table(const GradedModule& M);

ShortTable iota_star(const ShortTable& T, int pp);
ShortTable pi_star(const ShortTable& T, int qq);

bool selector_det_nonzero(const ShortTable& T, const RowSelector& s);
bool in_L0(const ShortTable& T);

/// q smallest pairs, identity on them, zero elsewhere.
ShortTable conca_witness(int e, int p, int q, std::uint32_t prime = Field::kDefaultPrime);
/// The lexicographically smallest or largest q pairs.
RowSelector smallest_selector(int e, int p, int q);
RowSelector largest_selector(int e, int p, int q);
/// q largest pairs, identity on them; requires x_e to be a Conca generator of A and q <= (e - r) p.
ShortTable largest_selector_witness(const GradedAlgebra& A, int e, int p, int q);

/// Cokernel of R(-1)^{ep-q} -> R^p described by B, as a table.
ShortTable presentation_to_table(const GradedAlgebra& A, const PresentationMatrix& B, bool truncate);

bool annihilated_by(const GradedModule& M, const Vec& x);

/// R / (l_1, ..., l_k) R for linear forms l_i, on the algebra's window.
GradedModule cyclic_quotient(const GradedAlgebra& A, const std::vector<Vec>& forms);

}  // namespace kz
