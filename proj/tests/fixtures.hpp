#pragma once

#include <random>
#include <vector>

#include "kz/algebra.hpp"

namespace kzt {

using namespace kz;

inline Matrix mat(std::vector<std::vector<Scalar>> rows, std::size_t cols = 0) { return Matrix::from_rows(rows, cols); }

inline Vec unit(int n, int i) {
  Vec v(std::size_t(n), 0);
  v[std::size_t(i)] = 1;
  return v;
}

// Index of x_a x_b among the lex-ordered quadratic monomials.
inline std::size_t qidx(int e, int a, int b) {
  auto m = quadratic_monomials(e);
  for (std::size_t k = 0; k < m.size(); ++k)
    if (m[k] == std::make_pair(std::min(a, b), std::max(a, b))) return k;
  return m.size();
}

// k[x]/(x^3) in degrees 0..2.
inline GradedAlgebra cubic_truncation() {
  GradedAlgebra A;
  A.e = 1;
  A.D = 2;
  A.dims = {1, 1, 1};
  A.act = {{mat({{1}}), mat({{1}})}};
  return A;
}

// k[x,y]/(x^2,y^3) with basis 1; x,y; xy,y^2; xy^2.
inline GradedAlgebra xy_example(std::uint32_t prime = Field::kDefaultPrime) {
  GradedAlgebra A;
  A.prime = prime;
  A.e = 2;
  A.D = 3;
  A.dims = {1, 2, 2, 1};
  A.act = {{mat({{1}, {0}}), mat({{0, 1}, {0, 0}}), mat({{0, 1}})},
           {mat({{0}, {1}}), mat({{1, 0}, {0, 1}}), mat({{1, 0}})}};
  return A;
}

// k[x_1..x_e]/(x_1^2,...,x_e^2) truncated so that it is exact.
inline GradedAlgebra squares(int e, std::uint32_t prime = Field::kDefaultPrime) {
  std::vector<std::pair<int, int>> k;
  for (int l = 0; l < e; ++l) k.emplace_back(l, l);
  return from_quadrics(monomial_presentation(e, k), e, prime);
}

// k[x,y]/(x^2) in degrees <= D (not exact).
inline GradedAlgebra q_example(int D, std::uint32_t prime = Field::kDefaultPrime) {
  return from_quadrics(monomial_presentation(2, {{0, 0}}), D, prime);
}

inline GradedAlgebra random_conca(int e, int r, std::uint64_t seed, std::uint32_t prime = Field::kDefaultPrime) {
  std::mt19937_64 rng(seed);
  return conca_presentation(e, r, random_conca_coeffs(e, r, prime, rng), prime);
}

// k[x_1..x_4]/(x_1^2, a x_1x_3 + x_2x_3, x_1x_4 + x_2x_4, x_2^2, x_3^2, x_3x_4, x_4^2).
inline GradedAlgebra remark_algebra(Scalar a, std::uint32_t prime) {
  QuadricPresentation p{4, {}};
  auto q = [&](std::vector<std::pair<std::pair<int, int>, Scalar>> terms) {
    Vec v(10, 0);
    for (auto [m, c] : terms) v[qidx(4, m.first, m.second)] = c;
    p.quadrics.push_back(v);
  };
  q({{{0, 0}, 1}});
  q({{{0, 2}, a}, {{1, 2}, 1}});
  q({{{0, 3}, 1}, {{1, 3}, 1}});
  q({{{1, 1}, 1}});
  q({{{2, 2}, 1}});
  q({{{2, 3}, 1}});
  q({{{3, 3}, 1}});
  return from_quadrics(p, 3, prime);
}

}  // namespace kzt
