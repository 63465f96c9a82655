#include "kz/algebra.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace kz {

// ---------------------------------------------------------------- containers

std::size_t GradedModule::dim(int j) const {
  if (j < lowdeg) return 0;
  if (j > top()) {
    if (exact) return 0;
    throw WindowError("module degree " + std::to_string(j) + " beyond window", top());
  }
  return dims[std::size_t(j - lowdeg)];
}

Matrix GradedModule::action(int l, int j) const {
  if (j >= lowdeg && j < top()) return act[std::size_t(l)][std::size_t(j - lowdeg)];
  return Matrix(dim(j + 1), dim(j));
}

std::size_t GradedModule::total_dim() const { return std::accumulate(dims.begin(), dims.end(), std::size_t(0)); }

int GradedModule::indeg() const {
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (dims[k] != 0) return lowdeg + int(k);
  return lowdeg;
}

GradedModule shifted(const GradedModule& M, int k) {
  GradedModule r = M;
  r.lowdeg += k;
  return r;
}

std::size_t GradedAlgebra::dim(int j) const {
  if (j < 0) return 0;
  if (j <= D) return dims[std::size_t(j)];
  if (exact) return 0;
  throw WindowError("algebra degree " + std::to_string(j) + " beyond window", D);
}

Matrix GradedAlgebra::action(int l, int j) const {
  if (j >= 0 && j < D) return act[std::size_t(l)][std::size_t(j)];
  return Matrix(dim(j + 1), dim(j));
}

int GradedAlgebra::top() const {
  if (!exact) return D;
  int t = 0;
  for (int j = 0; j <= D; ++j)
    if (dims[std::size_t(j)] != 0) t = j;
  return t;
}

bool GradedAlgebra::is_short() const { return exact && top() <= 2; }

namespace {

void normalize_exactness(GradedAlgebra& A) {
  for (int j = 0; j <= A.D; ++j)
    if (A.dims[std::size_t(j)] == 0) A.exact = true;
}

Matrix unit_column(std::size_t n, std::size_t i) {
  Matrix m(n, 1);
  m(i, 0) = 1;
  return m;
}

Matrix scalar_identity(const Field& f, std::size_t n, Scalar c) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = f.from_int(c);
  return m;
}

// Complement basis of a subspace W of k^n given by spanning rows: basis = non-pivot coordinates.
struct QuotientMap {
  std::vector<std::size_t> basis;
  Matrix proj;  // |basis| x n
};

QuotientMap quotient_map(const Field& f, std::size_t n, const Matrix& rows) {
  QuotientMap q;
  RrefResult r = rows.rows == 0 ? RrefResult{Matrix(0, n), {}} : row_space(f, rows);
  std::vector<char> is_piv(n, 0);
  for (auto c : r.pivots) is_piv[c] = 1;
  for (std::size_t c = 0; c < n; ++c)
    if (!is_piv[c]) q.basis.push_back(c);
  q.proj = Matrix(q.basis.size(), n);
  for (std::size_t b = 0; b < q.basis.size(); ++b) q.proj(b, q.basis[b]) = 1;
  for (std::size_t i = 0; i < r.pivots.size(); ++i)
    for (std::size_t b = 0; b < q.basis.size(); ++b) q.proj(b, r.pivots[i]) = f.neg(r.matrix(i, q.basis[b]));
  return q;
}

template <class ActFn>
Matrix element_action_impl(const GradedAlgebra& A, const ActFn& act, std::size_t dim_j, const Vec& r, int s, int j,
                           std::vector<std::optional<Matrix>>& lifts) {
  const Field f = A.field();
  if (r.size() != A.dim(s)) throw std::invalid_argument("element_action: element has wrong length");
  if (s == 0) return scalar_identity(f, dim_j, r.empty() ? 0 : r[0]);
  auto& L = lifts[std::size_t(s - 1)];
  if (!L) L = lift_matrix(A, s - 1);
  const Vec g = mul_vec(f, *L, r);
  const std::size_t n = A.dim(s - 1);
  Matrix out;
  for (int l = 0; l < A.e; ++l) {
    Vec gl(g.begin() + std::ptrdiff_t(l * n), g.begin() + std::ptrdiff_t((l + 1) * n));
    if (std::all_of(gl.begin(), gl.end(), [](Scalar v) { return v == 0; })) continue;
    Matrix term = mul(f, act(l, j + s - 1), element_action_impl(A, act, dim_j, gl, s - 1, j, lifts));
    out = out.rows == 0 && out.cols == 0 ? term : add(f, out, term);
  }
  if (out.rows == 0 && out.cols == 0) {
    const std::size_t target = act(0, j + s - 1).rows;
    out = Matrix(target, dim_j);
  }
  return out;
}

std::vector<std::vector<int>> monomials(int e, int deg) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (int(cur.size()) == deg) {
      out.push_back(cur);
      return;
    }
    for (int l = start; l < e; ++l) {
      cur.push_back(l);
      self(self, l);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

// Action of a monomial on M_j -> M_{j+deg} for a module given by actions.
template <class ActFn>
Matrix monomial_action(const Field& f, const ActFn& act, const std::vector<int>& mono, int j, std::size_t dim_j) {
  Matrix cur = Matrix::identity(dim_j);
  for (std::size_t k = 0; k < mono.size(); ++k) cur = mul(f, act(mono[mono.size() - 1 - k], j + int(k)), cur);
  return cur;
}

}  // namespace

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& v : violations)
    os << v.kind << " (l=" << v.l + 1 << ", l'=" << v.l2 + 1 << ", j=" << v.j << ")"
       << (v.detail.empty() ? "" : ": " + v.detail) << "\n";
  return os.str();
}

// ---------------------------------------------------------------- validation

ValidationReport validate(const GradedAlgebra& A) {
  ValidationReport rep;
  auto report = [&](std::string kind, int l, int l2, int j, std::string detail = {}) {
    rep.violations.push_back({std::move(kind), l, l2, j, std::move(detail)});
  };
  if (!is_prime(A.prime)) {
    report("prime", 0, 0, 0, std::to_string(A.prime) + " is not prime");
    return rep;
  }
  if (A.D < 0 || A.dims.size() != std::size_t(A.D) + 1) {
    report("shape", 0, 0, 0, "dims length must be D+1");
    return rep;
  }
  if (A.dims[0] != 1) report("shape", 0, 0, 0, "dims[0] must be 1");
  if (A.D >= 1 && A.dims[1] != std::size_t(A.e)) report("shape", 0, 0, 1, "dims[1] must equal e");
  if (A.D == 0 && A.e != 0 && !A.exact) report("shape", 0, 0, 0, "e > 0 needs D >= 1");
  if (A.act.size() != std::size_t(A.e)) {
    report("shape", 0, 0, 0, "act must have e entries");
    return rep;
  }
  for (int l = 0; l < A.e; ++l) {
    if (A.act[std::size_t(l)].size() != std::size_t(A.D)) {
      report("shape", l, l, 0, "act[l] must have D maps");
      return rep;
    }
    for (int j = 0; j < A.D; ++j) {
      const Matrix& m = A.act[std::size_t(l)][std::size_t(j)];
      if (m.rows != A.dims[std::size_t(j + 1)] || m.cols != A.dims[std::size_t(j)]) report("shape", l, l, j, "bad matrix shape");
    }
  }
  if (!rep.ok()) return rep;
  for (int l = 0; l < A.e && A.D >= 1; ++l)
    if (A.act[std::size_t(l)][0] != unit_column(std::size_t(A.e), std::size_t(l))) report("shape", l, l, 0, "1 must map to x_l");
  const Field f = A.field();
  for (int j = 0; j + 1 < A.D; ++j)
    for (int l = 0; l < A.e; ++l)
      for (int l2 = l + 1; l2 < A.e; ++l2) {
        Matrix a = mul(f, A.act[std::size_t(l)][std::size_t(j + 1)], A.act[std::size_t(l2)][std::size_t(j)]);
        Matrix b = mul(f, A.act[std::size_t(l2)][std::size_t(j + 1)], A.act[std::size_t(l)][std::size_t(j)]);
        if (a != b) report(j == 0 ? "commutativity" : "associativity", l, l2, j + 1);
      }
  for (int j = 0; j < A.D; ++j) {
    Matrix joint(A.dims[std::size_t(j + 1)], 0);
    for (int l = 0; l < A.e; ++l) joint = hstack(joint, A.act[std::size_t(l)][std::size_t(j)]);
    if (rank(f, joint) != A.dims[std::size_t(j + 1)]) report("standardness", 0, 0, j + 1, "R_1 R_j does not span R_{j+1}");
  }
  return rep;
}

ValidationReport validate_module(const GradedAlgebra& A, const GradedModule& M) {
  ValidationReport rep;
  auto report = [&](std::string kind, int l, int l2, int j, std::string detail = {}) {
    rep.violations.push_back({std::move(kind), l, l2, j, std::move(detail)});
  };
  if (M.prime != A.prime || M.e != A.e) {
    report("shape", 0, 0, 0, "module and algebra disagree on prime or e");
    return rep;
  }
  const std::size_t W = M.dims.empty() ? 0 : M.dims.size() - 1;
  if (M.act.size() != std::size_t(M.e)) {
    report("shape", 0, 0, 0, "act must have e entries");
    return rep;
  }
  for (int l = 0; l < M.e; ++l) {
    if (M.act[std::size_t(l)].size() != W) {
      report("shape", l, l, M.lowdeg, "act[l] must have one map per consecutive degree pair");
      return rep;
    }
    for (std::size_t k = 0; k < W; ++k) {
      const Matrix& m = M.act[std::size_t(l)][k];
      if (m.rows != M.dims[k + 1] || m.cols != M.dims[k]) report("shape", l, l, M.lowdeg + int(k), "bad matrix shape");
    }
  }
  if (!rep.ok()) return rep;
  const Field f = A.field();
  auto act = [&](int l, int j) { return M.action(l, j); };
  for (int j = M.lowdeg; j + 1 < M.top(); ++j)
    for (int l = 0; l < M.e; ++l)
      for (int l2 = l + 1; l2 < M.e; ++l2)
        if (mul(f, act(l, j + 1), act(l2, j)) != mul(f, act(l2, j + 1), act(l, j))) report("associativity", l, l2, j);
  if (!rep.ok()) return rep;
  // Relations of R in degree s must act as zero.
  const int span = M.top() - M.lowdeg;
  for (int s = 2; s <= span; ++s) {
    if (!A.known(s)) break;
    auto monos = monomials(A.e, s);
    Matrix images(A.dim(s), monos.size());
    for (std::size_t c = 0; c < monos.size(); ++c) {
      Matrix img = monomial_action(f, [&](int l, int j) { return A.action(l, j); }, monos[c], 0, 1);
      for (std::size_t i = 0; i < img.rows; ++i) images(i, c) = img(i, 0);
    }
    Matrix rel = kernel_rows(f, images);
    if (rel.rows == 0) continue;
    for (int j = M.lowdeg; j + s <= M.top(); ++j) {
      if (M.dim(j) == 0 || M.dim(j + s) == 0) continue;
      std::vector<Matrix> mono_act;
      for (const auto& mono : monos) mono_act.push_back(monomial_action(f, act, mono, j, M.dim(j)));
      for (std::size_t r = 0; r < rel.rows; ++r) {
        Matrix acc(M.dim(j + s), M.dim(j));
        for (std::size_t c = 0; c < monos.size(); ++c)
          if (rel(r, c) != 0) acc = add(f, acc, scale(f, mono_act[c], rel(r, c)));
        if (!acc.is_zero()) report("relation", 0, 0, j, "a relation of degree " + std::to_string(s) + " acts nontrivially");
      }
    }
  }
  return rep;
}

PowerSeries hilbert(const GradedAlgebra& A) {
  std::vector<std::int64_t> c(A.dims.begin(), A.dims.end());
  return {LaurentPoly(0, c), A.exact ? PowerSeries::kExact : A.D + 1};
}

PowerSeries hilbert(const GradedModule& M) {
  std::vector<std::int64_t> c(M.dims.begin(), M.dims.end());
  return {LaurentPoly(M.lowdeg, c), M.exact ? PowerSeries::kExact : M.top() + 1};
}

// ---------------------------------------------------------------- builders

std::vector<std::pair<int, int>> quadratic_monomials(int e) {
  std::vector<std::pair<int, int>> out;
  for (int l = 0; l < e; ++l)
    for (int l2 = l; l2 < e; ++l2) out.emplace_back(l, l2);
  return out;
}

QuadricPresentation monomial_presentation(int e, const std::vector<std::pair<int, int>>& killed) {
  auto monos = quadratic_monomials(e);
  QuadricPresentation p{e, {}};
  for (auto [a, b] : killed) {
    auto key = std::make_pair(std::min(a, b), std::max(a, b));
    auto it = std::find(monos.begin(), monos.end(), key);
    if (it == monos.end()) throw std::invalid_argument("monomial_presentation: index out of range");
    Vec v(monos.size(), 0);
    v[std::size_t(it - monos.begin())] = 1;
    p.quadrics.push_back(v);
  }
  return p;
}

GradedAlgebra from_quadrics(const QuadricPresentation& pres, int D, std::uint32_t prime) {
  const Field f(prime);
  const int e = pres.e;
  if (e < 0 || D < 0) throw std::invalid_argument("from_quadrics: bad e or D");
  const std::size_t n2 = std::size_t(e) * std::size_t(e + 1) / 2;
  Matrix V(pres.quadrics.size(), n2);
  for (std::size_t i = 0; i < pres.quadrics.size(); ++i) {
    if (pres.quadrics[i].size() != n2) throw ValidationError("quadric has wrong number of coefficients");
    for (std::size_t c = 0; c < n2; ++c) V(i, c) = pres.quadrics[i][c] % prime;
  }
  if (rank(f, V) != V.rows) throw ValidationError("quadrics are linearly dependent");

  std::vector<std::vector<std::vector<int>>> S;
  std::vector<std::map<std::vector<int>, std::size_t>> index;
  std::vector<QuotientMap> Q;
  Matrix I;  // ideal in current degree, rows in monomial coordinates
  for (int j = 0; j <= D + 1; ++j) {
    S.push_back(monomials(e, j));
    index.emplace_back();
    for (std::size_t k = 0; k < S.back().size(); ++k) index.back()[S.back()[k]] = k;
    const std::size_t n = S.back().size();
    if (j < 2) {
      I = Matrix(0, n);
    } else if (j == 2) {
      I = V;
    } else {
      Matrix next(0, n);
      std::vector<Vec> rows;
      for (std::size_t r = 0; r < I.rows; ++r)
        for (int l = 0; l < e; ++l) {
          Vec v(n, 0);
          for (std::size_t c = 0; c < I.cols; ++c) {
            if (I(r, c) == 0) continue;
            auto m = S[std::size_t(j - 1)][c];
            m.insert(std::upper_bound(m.begin(), m.end(), l), l);
            auto& slot = v[index.back()[m]];
            slot = f.add(slot, I(r, c));
          }
          rows.push_back(std::move(v));
        }
      next = rows.empty() ? Matrix(0, n) : Matrix::from_rows(rows, n);
      auto rs = next.rows == 0 ? RrefResult{Matrix(0, n), {}} : row_space(f, next);
      I = rs.matrix;
    }
    Q.push_back(quotient_map(f, n, I));
    if (Q.back().basis.empty()) {
      // Every higher piece vanishes as well.
      D = std::min(D, j);
      break;
    }
  }
  const int top_computed = int(Q.size()) - 1;
  GradedAlgebra A;
  A.prime = prime;
  A.e = e;
  A.D = D;
  A.exact = top_computed <= D || Q[std::size_t(D + 1)].basis.empty();
  for (int j = 0; j <= D; ++j) A.dims.push_back(Q[std::size_t(j)].basis.size());
  A.act.assign(std::size_t(e), {});
  for (int l = 0; l < e; ++l)
    for (int j = 0; j < D; ++j) {
      const auto& src = Q[std::size_t(j)];
      const auto& dst = Q[std::size_t(j + 1)];
      Matrix m(dst.basis.size(), src.basis.size());
      for (std::size_t b = 0; b < src.basis.size(); ++b) {
        auto mono = S[std::size_t(j)][src.basis[b]];
        mono.insert(std::upper_bound(mono.begin(), mono.end(), l), l);
        const std::size_t c = index[std::size_t(j + 1)][mono];
        for (std::size_t i = 0; i < dst.basis.size(); ++i) m(i, b) = dst.proj(i, c);
      }
      A.act[std::size_t(l)].push_back(std::move(m));
    }
  return A;
}

GradedAlgebra truncate(const GradedAlgebra& A, int Dp) {
  if (Dp < 0 || Dp > A.D) throw std::invalid_argument("truncate: degree out of range");
  GradedAlgebra B = A;
  B.D = Dp;
  B.dims.resize(std::size_t(Dp) + 1);
  for (auto& v : B.act) v.resize(std::size_t(Dp));
  B.exact = true;
  return B;
}

// ---------------------------------------------------------------- products

Matrix linear_form_action(const GradedAlgebra& A, const Vec& x, int j) {
  if (x.size() != std::size_t(A.e)) throw std::invalid_argument("linear form has wrong length");
  const Field f = A.field();
  Matrix out(A.dim(j + 1), A.dim(j));
  for (int l = 0; l < A.e; ++l)
    if (x[std::size_t(l)] != 0) out = add(f, out, scale(f, A.action(l, j), x[std::size_t(l)]));
  return out;
}

Matrix lift_matrix(const GradedAlgebra& A, int j) {
  const Field f = A.field();
  Matrix joint(A.dim(j + 1), 0);
  for (int l = 0; l < A.e; ++l) joint = hstack(joint, A.action(l, j));
  auto L = right_inverse(f, joint);
  if (!L) throw ValidationError("algebra is not standard graded in degree " + std::to_string(j + 1));
  return *L;
}

Matrix element_action(const GradedAlgebra& A, const GradedModule& M, const Vec& r, int s, int j) {
  std::vector<std::optional<Matrix>> lifts(std::size_t(std::max(s, 0)));
  return element_action_impl(A, [&](int l, int jj) { return M.action(l, jj); }, M.dim(j), r, s, j, lifts);
}

Matrix element_action(const GradedAlgebra& A, const Vec& r, int s, int j) {
  std::vector<std::optional<Matrix>> lifts(std::size_t(std::max(s, 0)));
  return element_action_impl(A, [&](int l, int jj) { return A.action(l, jj); }, A.dim(j), r, s, j, lifts);
}

// ---------------------------------------------------------------- Conca generators

bool conca_check(const GradedAlgebra& A, const Vec& x) {
  if (x.size() != std::size_t(A.e)) throw std::invalid_argument("conca_check: vector has wrong length");
  if (std::all_of(x.begin(), x.end(), [](Scalar v) { return v == 0; })) return false;
  const Field f = A.field();
  Matrix X = linear_form_action(A, x, 1);
  const Vec sq = mul_vec(f, X, x);
  if (std::any_of(sq.begin(), sq.end(), [](Scalar v) { return v != 0; })) return false;
  return rank(f, X) == A.dim(2);
}

namespace {

std::uint64_t projective_count_bound(std::uint32_t P, int e) {
  std::uint64_t n = 1;
  for (int i = 0; i < e; ++i) {
    if (n > (std::uint64_t(1) << 40) / P) return ~std::uint64_t(0);
    n *= P;
  }
  return n;
}

// Calls visit on every projective representative (first nonzero coordinate 1) until it returns true.
template <class Visit>
bool for_each_projective(int e, std::uint32_t P, Visit&& visit) {
  for (int lead = 0; lead < e; ++lead) {
    Vec x(std::size_t(e), 0);
    x[std::size_t(lead)] = 1;
    while (true) {
      if (visit(x)) return true;
      int k = e - 1;
      while (k > lead && x[std::size_t(k)] == P - 1) x[std::size_t(k--)] = 0;
      if (k == lead) break;
      ++x[std::size_t(k)];
    }
  }
  return false;
}

constexpr std::uint64_t kDefaultExhaustiveBudget = 10'000'000;

}  // namespace

ConcaSearchResult conca_search(const GradedAlgebra& A, SearchStrategy strategy, std::uint64_t budget,
                               std::uint64_t seed) {
  ConcaSearchResult res;
  const std::uint32_t P = A.prime;
  if (strategy == SearchStrategy::Exhaustive) {
    const std::uint64_t b = budget == 0 ? kDefaultExhaustiveBudget : budget;
    if (projective_count_bound(P, A.e) <= b) {
      bool found = for_each_projective(A.e, P, [&](const Vec& x) {
        ++res.tried;
        if (!conca_check(A, x)) return false;
        res.x = x;
        return true;
      });
      res.status = found ? SearchStatus::Found : SearchStatus::ProvenAbsent;
      return res;
    }
  }
  const std::uint64_t trials = (strategy == SearchStrategy::Randomized && budget != 0) ? budget : 10ull * P;
  for (int l = 0; l < A.e && res.tried < trials; ++l) {
    Vec x(std::size_t(A.e), 0);
    x[std::size_t(l)] = 1;
    ++res.tried;
    if (conca_check(A, x)) {
      res.x = x;
      res.status = SearchStatus::Found;
      return res;
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> coord(0, P - 1);
  const Field f = A.field();
  while (res.tried < trials) {
    Vec x(std::size_t(A.e));
    for (auto& v : x) v = coord(rng);
    ++res.tried;
    auto it = std::find_if(x.begin(), x.end(), [](Scalar v) { return v != 0; });
    if (it == x.end()) continue;
    const Scalar inv = f.inv(*it);
    for (auto& v : x) v = f.mul(v, inv);
    if (conca_check(A, x)) {
      res.x = x;
      res.status = SearchStatus::Found;
      return res;
    }
  }
  res.status = SearchStatus::BudgetExhausted;
  return res;
}

std::vector<Vec> conca_generators(const GradedAlgebra& A) {
  if (projective_count_bound(A.prime, A.e) > kDefaultExhaustiveBudget)
    throw std::invalid_argument("conca_generators: field too large for enumeration");
  std::vector<Vec> out;
  for_each_projective(A.e, A.prime, [&](const Vec& x) {
    if (conca_check(A, x)) out.push_back(x);
    return false;
  });
  return out;
}

ConcaCoeffs random_conca_coeffs(int e, int r, std::uint32_t prime, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> coord(0, prime - 1);
  ConcaCoeffs a(std::size_t(e - 1) * std::size_t(e) / 2, Vec(std::size_t(std::max(r, 0))));
  for (auto& v : a)
    for (auto& c : v) c = coord(rng);
  return a;
}

GradedAlgebra conca_presentation(int e, int r, const ConcaCoeffs& a, std::uint32_t prime) {
  if (e < 2 || r < 1 || r > e - 1) throw std::invalid_argument("conca_presentation: need 1 <= r <= e-1");
  const auto pairs = quadratic_monomials(e - 1);
  if (a.size() != pairs.size()) throw std::invalid_argument("conca_presentation: wrong number of coefficient vectors");
  for (const auto& v : a)
    if (v.size() != std::size_t(r)) throw std::invalid_argument("conca_presentation: coefficient vector length must be r");
  GradedAlgebra A;
  A.prime = prime;
  A.e = e;
  A.D = 2;
  A.dims = {1, std::size_t(e), std::size_t(r)};
  A.exact = true;
  A.act.assign(std::size_t(e), {});
  std::map<std::pair<int, int>, std::size_t> pair_index;
  for (std::size_t k = 0; k < pairs.size(); ++k) pair_index[pairs[k]] = k;
  for (int l = 0; l < e; ++l) {
    A.act[std::size_t(l)].push_back(unit_column(std::size_t(e), std::size_t(l)));
    Matrix m{std::size_t(r), std::size_t(e)};
    for (int l2 = 0; l2 < e; ++l2) {
      if (l == e - 1 || l2 == e - 1) {
        const int o = l == e - 1 ? l2 : l;
        if (o < r) m(std::size_t(o), std::size_t(l2)) = 1;
      } else {
        const auto& v = a[pair_index[{std::min(l, l2), std::max(l, l2)}]];
        for (int h = 0; h < r; ++h) m(std::size_t(h), std::size_t(l2)) = v[std::size_t(h)] % prime;
      }
    }
    A.act[std::size_t(l)].push_back(std::move(m));
  }
  return A;
}

// ---------------------------------------------------------------- extensions and quotients

GradedAlgebra trivial_extension(const GradedAlgebra& A, const GradedModule& M) {
  if (M.prime != A.prime || M.e != A.e) throw std::invalid_argument("trivial_extension: module over a different algebra");
  if (M.is_zero()) return A;
  const Field f = A.field();
  const int d = M.indeg();
  const std::size_t m0 = M.dim(d);
  const int e2 = A.e + int(m0);
  int D2;
  bool exact = A.exact && M.exact;
  if (exact) {
    D2 = std::max(A.top(), M.top() - d + 1);
  } else {
    D2 = 1 << 20;
    if (!A.exact) D2 = std::min(D2, A.D);
    if (!M.exact) D2 = std::min(D2, M.top() - d + 1);
  }
  GradedAlgebra B;
  B.prime = A.prime;
  B.e = e2;
  B.D = D2;
  B.exact = exact;
  for (int j = 0; j <= D2; ++j) B.dims.push_back(A.dim(j) + M.dim(j + d - 1));
  B.act.assign(std::size_t(e2), {});
  // rho[k] : R_j -> M_{d+j}, r -> r u_k, built degree by degree.
  std::vector<Matrix> rho(m0);
  for (std::size_t k = 0; k < m0; ++k) rho[k] = unit_column(m0, k);
  for (int j = 0; j < D2; ++j) {
    const std::size_t rj = A.dim(j), rj1 = A.dim(j + 1), mj = M.dim(j + d - 1), mj1 = M.dim(j + d);
    for (int l = 0; l < A.e; ++l) {
      Matrix blk(rj1 + mj1, rj + mj);
      Matrix a = A.action(l, j), b = M.action(l, j + d - 1);
      for (std::size_t r = 0; r < rj1; ++r)
        for (std::size_t c = 0; c < rj; ++c) blk(r, c) = a(r, c);
      for (std::size_t r = 0; r < mj1; ++r)
        for (std::size_t c = 0; c < mj; ++c) blk(rj1 + r, rj + c) = b(r, c);
      B.act[std::size_t(l)].push_back(std::move(blk));
    }
    for (std::size_t k = 0; k < m0; ++k) {
      Matrix blk(rj1 + mj1, rj + mj);
      for (std::size_t r = 0; r < mj1; ++r)
        for (std::size_t c = 0; c < rj; ++c) blk(rj1 + r, c) = rho[k](r, c);
      B.act[std::size_t(A.e) + k].push_back(std::move(blk));
    }
    if (j + 1 < D2 && rj1 > 0) {
      Matrix L = lift_matrix(A, j);
      for (std::size_t k = 0; k < m0; ++k) {
        Matrix next(M.dim(j + d + 1), rj1);
        for (int l = 0; l < A.e; ++l) {
          std::vector<std::size_t> rows(rj);
          std::iota(rows.begin(), rows.end(), std::size_t(l) * rj);
          next = add(f, next, mul(f, mul(f, M.action(l, j + d), rho[k]), select_rows(L, rows)));
        }
        rho[k] = std::move(next);
      }
    } else {
      for (auto& r : rho) r = Matrix();
    }
  }
  normalize_exactness(B);
  return B;
}

QuotientResult quotient_by_element(const GradedAlgebra& Q, const Vec& g) {
  const Field f = Q.field();
  if (Q.D < 2 || g.size() != Q.dim(2)) throw std::invalid_argument("quotient_by_element: g must lie in Q_2");
  QuotientResult res;
  res.nzd = true;
  std::vector<QuotientMap> maps;
  for (int j = 0; j <= Q.D; ++j) {
    const std::size_t n = Q.dim(j);
    if (j < 2) {
      maps.push_back(quotient_map(f, n, Matrix(0, n)));
      continue;
    }
    Matrix G = element_action(Q, g, 2, j - 2);
    maps.push_back(quotient_map(f, n, transpose(G)));
  }
  for (int j = 0; j + 2 <= Q.D; ++j)
    if (rank(f, element_action(Q, g, 2, j)) != Q.dim(j)) res.nzd = false;
  GradedAlgebra& R = res.R;
  R.prime = Q.prime;
  R.e = Q.e;
  R.D = Q.D;
  R.exact = Q.exact;
  for (auto& q : maps) R.dims.push_back(q.basis.size());
  R.act.assign(std::size_t(Q.e), {});
  for (int l = 0; l < Q.e; ++l)
    for (int j = 0; j < Q.D; ++j) {
      const auto& src = maps[std::size_t(j)];
      Matrix incl = select_cols(Matrix::identity(Q.dim(j)), src.basis);
      R.act[std::size_t(l)].push_back(mul(f, maps[std::size_t(j + 1)].proj, mul(f, Q.action(l, j), incl)));
    }
  normalize_exactness(R);
  return res;
}

GradedAlgebra change_basis(const GradedAlgebra& A, const Matrix& P) {
  const Field f = A.field();
  if (P.rows != std::size_t(A.e) || P.cols != std::size_t(A.e) || rank(f, P) != P.rows)
    throw std::invalid_argument("change_basis: P must be invertible e x e");
  GradedAlgebra B = A;
  for (int l = 0; l < A.e; ++l)
    for (int j = 1; j < A.D; ++j) {
      Matrix m(A.dim(j + 1), A.dim(j));
      for (int k = 0; k < A.e; ++k)
        if (P(std::size_t(k), std::size_t(l)) != 0)
          m = add(f, m, scale(f, A.act[std::size_t(k)][std::size_t(j)], P(std::size_t(k), std::size_t(l))));
      B.act[std::size_t(l)][std::size_t(j)] = j == 1 ? mul(f, m, P) : m;
    }
  return B;
}

GradedModule regular_module(const GradedAlgebra& A) {
  GradedModule M;
  M.prime = A.prime;
  M.e = A.e;
  M.lowdeg = 0;
  M.dims = A.dims;
  M.act = A.act;
  M.exact = A.exact;
  return M;
}

GradedModule residue_field(const GradedAlgebra& A) {
  GradedModule M;
  M.prime = A.prime;
  M.e = A.e;
  M.lowdeg = 0;
  M.dims = {1};
  M.act.assign(std::size_t(A.e), {});
  return M;
}

}  // namespace kz
