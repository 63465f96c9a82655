#include "kz/shortmod.hpp"

#include <algorithm>

namespace kz {

ShortTable random_table(int e, int p, int q, std::uint32_t prime, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> coord(0, prime - 1);
  ShortTable T{prime, e, p, q, Matrix(std::size_t(e) * std::size_t(p), std::size_t(q))};
  for (auto& v : T.C.a) v = coord(rng);
  return T;
}

GradedModule table_to_module(const GradedAlgebra& A, const ShortTable& T) {
  if (T.e != A.e || T.prime != A.prime) throw ValidationError("table does not match the algebra");
  if (T.C.rows != std::size_t(T.e) * std::size_t(T.p) || T.C.cols != std::size_t(T.q))
    throw ValidationError("table matrix must be ep x q");
  GradedModule M;
  M.prime = T.prime;
  M.e = T.e;
  M.lowdeg = 0;
  M.dims = {std::size_t(T.p), std::size_t(T.q)};
  M.act.assign(std::size_t(T.e), {});
  for (int l = 0; l < T.e; ++l) {
    Matrix B(std::size_t(T.q), std::size_t(T.p));
    for (int n = 0; n < T.p; ++n)
      for (int h = 0; h < T.q; ++h) B(std::size_t(h), std::size_t(n)) = T.C(T.row(l, n), std::size_t(h));
    M.act[std::size_t(l)].push_back(std::move(B));
  }
  return M;
}

ShortTable module_to_table(const GradedModule& M) {
  if (M.is_zero()) throw ValidationError("zero module has no table");
  if (!M.exact) throw ValidationError("module is not short");
  const int d = M.indeg();
  for (int j = M.lowdeg; j <= M.top(); ++j)
    if (j != d && j != d + 1 && M.dim(j) != 0) throw ValidationError("module is not short");
  ShortTable T{M.prime, M.e, int(M.dim(d)), int(M.dim(d + 1)), {}};
  T.C = Matrix(std::size_t(T.e) * std::size_t(T.p), std::size_t(T.q));
  for (int l = 0; l < T.e; ++l) {
    Matrix B = M.action(l, d);
    for (int n = 0; n < T.p; ++n)
      for (int h = 0; h < T.q; ++h) T.C(T.row(l, n), std::size_t(h)) = B(std::size_t(h), std::size_t(n));
  }
  return T;
}

ShortTable iota_star(const ShortTable& T, int pp) {
  if (pp < 1 || pp > T.p) throw std::out_of_range("iota_star: need 1 <= p' <= p");
  ShortTable R{T.prime, T.e, pp, T.q, Matrix(std::size_t(T.e) * std::size_t(pp), std::size_t(T.q))};
  for (int l = 0; l < T.e; ++l)
    for (int n = 0; n < pp; ++n)
      for (int h = 0; h < T.q; ++h) R.C(R.row(l, n), std::size_t(h)) = T.C(T.row(l, n), std::size_t(h));
  return R;
}

ShortTable pi_star(const ShortTable& T, int qq) {
  if (qq < 0 || qq > T.q) throw std::out_of_range("pi_star: need 0 <= q <= q'");
  std::vector<std::size_t> cols{};
  cols.resize(std::size_t(qq));
  for (int h = 0; h < qq; ++h) cols[std::size_t(h)] = std::size_t(h);
  return {T.prime, T.e, T.p, qq, select_cols(T.C, cols)};
}

bool selector_det_nonzero(const ShortTable& T, const RowSelector& s) {
  if (s.s.size() != std::size_t(T.q)) throw std::invalid_argument("selector must have q pairs");
  std::vector<std::size_t> rows;
  for (auto [l, n] : s.s) {
    if (l < 0 || l >= T.e || n < 0 || n >= T.p) throw std::out_of_range("selector pair out of range");
    rows.push_back(T.row(l, n));
  }
  return rank(T.field(), select_rows(T.C, rows)) == std::size_t(T.q);
}

bool in_L0(const ShortTable& T) { return rank(T.field(), T.C) == std::size_t(T.q); }

RowSelector smallest_selector(int e, int p, int q) {
  if (q < 0 || q > e * p) throw std::out_of_range("selector size out of range");
  RowSelector s;
  for (int k = 0; k < q; ++k) s.s.emplace_back(k / p, k % p);
  return s;
}

RowSelector largest_selector(int e, int p, int q) {
  if (q < 0 || q > e * p) throw std::out_of_range("selector size out of range");
  RowSelector s;
  for (int k = e * p - q; k < e * p; ++k) s.s.emplace_back(k / p, k % p);
  return s;
}

namespace {

ShortTable identity_on(int e, int p, const RowSelector& s, std::uint32_t prime) {
  const int q = int(s.s.size());
  ShortTable T{prime, e, p, q, Matrix(std::size_t(e) * std::size_t(p), std::size_t(q))};
  for (int k = 0; k < q; ++k) T.C(T.row(s.s[std::size_t(k)].first, s.s[std::size_t(k)].second), std::size_t(k)) = 1;
  return T;
}

}  // namespace

ShortTable conca_witness(int e, int p, int q, std::uint32_t prime) {
  if (e < 1 || p < 0 || q < 0 || q > (e - 1) * p) throw std::invalid_argument("conca_witness: need q <= (e-1)p");
  return identity_on(e, p, smallest_selector(e, p, q), prime);
}

ShortTable largest_selector_witness(const GradedAlgebra& A, int e, int p, int q) {
  if (A.e != e) throw std::invalid_argument("largest_selector_witness: e does not match the algebra");
  const int r = int(A.dim(2));
  if (p < 0 || q < 0 || q > (e - r) * p) throw std::invalid_argument("largest_selector_witness: need q <= (e-r)p");
  Vec xe(std::size_t(e), 0);
  xe[std::size_t(e - 1)] = 1;
  if (!conca_check(A, xe)) throw PreconditionError("largest_selector_witness: x_e is not a Conca generator");
  return identity_on(e, p, largest_selector(e, p, q), A.prime);
}

ShortTable presentation_to_table(const GradedAlgebra& A, const PresentationMatrix& P, bool truncate) {
  const Field f = A.field();
  const int e = A.e, p = P.p;
  const std::size_t ep = std::size_t(e) * std::size_t(p);
  if (P.e != e || P.B.rows != ep) throw ValidationError("presentation matrix must have ep rows");
  if (!A.is_short()) throw PreconditionError("presentation_to_table: algebra must be short");
  if (rank(f, P.B) != P.B.cols) throw PreconditionError("presentation_to_table: kappa_1 is not injective");
  const int q = int(ep - P.B.cols);
  // Degree-two piece of the cokernel: R_2 (x) k^p modulo R_1 times the relations.
  const std::size_t r = A.dim(2);
  if (r > 0) {
    std::vector<Matrix> prod{};
    prod.resize(std::size_t(e));
    for (int l = 0; l < e; ++l) prod[std::size_t(l)] = A.action(l, 1);
    Matrix img(0, r * std::size_t(p));
    for (std::size_t h = 0; h < P.B.cols; ++h)
      for (int l2 = 0; l2 < e; ++l2) {
        Matrix v(1, r * std::size_t(p));
        for (int l = 0; l < e; ++l)
          for (int n = 0; n < p; ++n) {
            const Scalar b = P.B(std::size_t(l) * std::size_t(p) + std::size_t(n), h);
            if (b == 0) continue;
            for (std::size_t beta = 0; beta < r; ++beta) {
              const Scalar c = prod[std::size_t(l2)](beta, std::size_t(l));
              auto& slot = v(0, beta * std::size_t(p) + std::size_t(n));
              slot = f.add(slot, f.mul(b, c));
            }
          }
        img = vstack(img, v);
      }
    if (rank(f, img) < r * std::size_t(p) && !truncate)
      throw ValidationError("presentation_to_table: cokernel has a nonzero degree-two piece");
  }
  // Quotient basis of k^{ep} / col(B): non-pivot coordinates.
  RrefResult rs = P.B.cols == 0 ? RrefResult{Matrix(0, ep), {}} : row_space(f, transpose(P.B));
  std::vector<char> piv(ep, 0);
  for (auto c : rs.pivots) piv[c] = 1;
  std::vector<std::size_t> basis;
  for (std::size_t c = 0; c < ep; ++c)
    if (!piv[c]) basis.push_back(c);
  ShortTable T{A.prime, e, p, q, Matrix(ep, std::size_t(q))};
  for (std::size_t b = 0; b < basis.size(); ++b) T.C(basis[b], b) = 1;
  for (std::size_t i = 0; i < rs.pivots.size(); ++i)
    for (std::size_t b = 0; b < basis.size(); ++b) T.C(rs.pivots[i], b) = f.neg(rs.matrix(i, basis[b]));
  return T;
}

bool annihilated_by(const GradedModule& M, const Vec& x) {
  if (x.size() != std::size_t(M.e)) throw std::invalid_argument("annihilated_by: vector has wrong length");
  const Field f = M.field();
  for (int j = M.lowdeg; j < M.top(); ++j) {
    Matrix acc(M.dim(j + 1), M.dim(j));
    for (int l = 0; l < M.e; ++l)
      if (x[std::size_t(l)] != 0) acc = add(f, acc, scale(f, M.action(l, j), x[std::size_t(l)]));
    if (!acc.is_zero()) return false;
  }
  return true;
}

GradedModule cyclic_quotient(const GradedAlgebra& A, const std::vector<Vec>& forms) {
  const Field f = A.field();
  const int T = A.top();
  // Complement basis (non-pivot coordinates) and projection for each R_j / I_j.
  std::vector<std::vector<std::size_t>> basis(std::size_t(T) + 1);
  std::vector<Matrix> proj(std::size_t(T) + 1);
  for (int j = 0; j <= T; ++j) {
    const std::size_t n = A.dim(j);
    Matrix gens(0, n);
    if (j >= 1)
      for (const auto& x : forms) gens = vstack(gens, transpose(linear_form_action(A, x, j - 1)));
    RrefResult rs = gens.rows == 0 ? RrefResult{Matrix(0, n), {}} : row_space(f, gens);
    std::vector<char> piv(n, 0);
    for (auto c : rs.pivots) piv[c] = 1;
    auto& b = basis[std::size_t(j)];
    for (std::size_t c = 0; c < n; ++c)
      if (!piv[c]) b.push_back(c);
    Matrix& P = proj[std::size_t(j)];
    P = Matrix(b.size(), n);
    for (std::size_t k = 0; k < b.size(); ++k) P(k, b[k]) = 1;
    for (std::size_t i = 0; i < rs.pivots.size(); ++i)
      for (std::size_t k = 0; k < b.size(); ++k) P(k, rs.pivots[i]) = f.neg(rs.matrix(i, b[k]));
  }
  GradedModule M;
  M.prime = A.prime;
  M.e = A.e;
  M.lowdeg = 0;
  M.exact = A.exact;
  int top = T;
  if (M.exact)
    while (top > 0 && basis[std::size_t(top)].empty()) --top;
  for (int j = 0; j <= top; ++j) M.dims.push_back(basis[std::size_t(j)].size());
  M.act.assign(std::size_t(A.e), {});
  for (int l = 0; l < A.e; ++l)
    for (int j = 0; j < top; ++j) {
      Matrix incl = select_cols(Matrix::identity(A.dim(j)), basis[std::size_t(j)]);
      M.act[std::size_t(l)].push_back(mul(f, proj[std::size_t(j + 1)], mul(f, A.action(l, j), incl)));
    }
  return M;
}

}  // namespace kz
