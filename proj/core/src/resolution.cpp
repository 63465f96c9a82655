#include "kz/resolution.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <map>
#include <random>
#include <sstream>

namespace kz {

// ---------------------------------------------------------------- slice accessors

std::vector<int> ResolutionStep::gen_degrees() const {
  std::vector<int> out;
  for (const auto& b : blocks) out.insert(out.end(), b.images.rows, b.deg);
  return out;
}

std::size_t ResolutionStep::total() const {
  std::size_t n = 0;
  for (const auto& [j, c] : betti) n += c;
  return n;
}

FreeLayout free_layout(const GradedAlgebra& A, const std::vector<int>& degs, int j) {
  FreeLayout L;
  L.off.resize(degs.size());
  L.len.resize(degs.size());
  for (std::size_t g = 0; g < degs.size(); ++g) {
    L.off[g] = L.total;
    L.len[g] = A.dim(j - degs[g]);
    L.total += L.len[g];
  }
  return L;
}

std::size_t ResolutionSlice::betti(int i, int j) const {
  if (i < 0 || i > m) throw std::out_of_range("betti: homological degree " + std::to_string(i) + " not computed");
  if (j > J && !complete) throw WindowError("betti: degree " + std::to_string(j) + " beyond window", J);
  const auto& b = steps[std::size_t(i)].betti;
  auto it = b.find(j);
  return it == b.end() ? 0 : it->second;
}

std::size_t ResolutionSlice::betti_total(int i) const {
  if (i < 0 || i > m) throw std::out_of_range("betti_total: homological degree not computed");
  if (!complete) throw WindowError("betti_total: Betti numbers beyond the window are unknown", J);
  return steps[std::size_t(i)].total();
}

bool ResolutionSlice::linear_through(int k) const {
  for (int i = 0; i <= std::min(k, m); ++i)
    for (const auto& [j, c] : steps[std::size_t(i)].betti)
      if (c != 0 && j != i + indeg) return false;
  return true;
}

TruncSeries ResolutionSlice::poincare() const {
  TruncSeries P(m + 1);
  for (int i = 0; i <= m; ++i)
    for (const auto& [j, c] : steps[std::size_t(i)].betti)
      if (c != 0) P.add_term(std::int64_t(c), i, j);
  return P;
}

Vec ResolutionSlice::entry(const GradedAlgebra& A, int i, std::size_t g, std::size_t gp) const {
  if (i < 1 || i > m || !steps[std::size_t(i)].materialized) throw std::out_of_range("entry: differential not recorded");
  const auto degs = steps[std::size_t(i)].gen_degrees();
  const auto tdegs = steps[std::size_t(i - 1)].gen_degrees();
  if (g >= degs.size() || gp >= tdegs.size()) throw std::out_of_range("entry: generator index");
  std::size_t row = g;
  const GenBlock* blk = nullptr;
  for (const auto& b : steps[std::size_t(i)].blocks) {
    if (row < b.images.rows) {
      blk = &b;
      break;
    }
    row -= b.images.rows;
  }
  FreeLayout L = free_layout(A, tdegs, blk->deg);
  return Vec(blk->images.row(row) + L.off[gp], blk->images.row(row) + L.off[gp] + L.len[gp]);
}

std::size_t ResolutionSlice::syzygy_dim(const GradedAlgebra& A, int j) const {
  if (j > J) throw WindowError("syzygy_dim: degree beyond window", J);
  std::size_t n = 0;
  for (const auto& [a, c] : steps[std::size_t(m)].betti) n += c * A.dim(j - a);
  auto it = kernel_dims[std::size_t(m)].find(j);
  return n - (it == kernel_dims[std::size_t(m)].end() ? 0 : it->second);
}

// ---------------------------------------------------------------- engine internals

namespace {

// Multiplication by the basis elements of R_t on the pieces V_s of a graded module V.
class MultTable {
 public:
  using ActFn = std::function<Matrix(int, int)>;
  using DimFn = std::function<std::size_t(int)>;
  MultTable(const GradedAlgebra& A, ActFn act, DimFn dim) : A_(A), act_(std::move(act)), dim_(std::move(dim)) {}

  const std::vector<Matrix>& get(int t, int s) {
    auto key = std::make_pair(t, s);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::vector<Matrix> out;
    if (t == 0) {
      out.push_back(Matrix::identity(dim_(s)));
    } else {
      const Field f = A_.field();
      const auto& prev = get(t - 1, s);
      const std::size_t n = A_.dim(t - 1), nt = A_.dim(t);
      if (nt > 0) {
        auto lit = lifts_.find(t - 1);
        if (lit == lifts_.end()) lit = lifts_.emplace(t - 1, lift_matrix(A_, t - 1)).first;
        const Matrix& L = lit->second;
        std::vector<std::vector<Matrix>> xp(std::size_t(A_.e));
        for (int l = 0; l < A_.e; ++l) {
          Matrix X = act_(l, s + t - 1);
          for (std::size_t b = 0; b < n; ++b) xp[std::size_t(l)].push_back(mul(f, X, prev[b]));
        }
        for (std::size_t beta = 0; beta < nt; ++beta) {
          Matrix acc(dim_(s + t), dim_(s));
          for (int l = 0; l < A_.e; ++l)
            for (std::size_t b = 0; b < n; ++b) {
              const Scalar c = L(std::size_t(l) * n + b, beta);
              if (c != 0) acc = add(f, acc, scale(f, xp[std::size_t(l)][b], c));
            }
          out.push_back(std::move(acc));
        }
      }
    }
    return cache_.emplace(key, std::move(out)).first->second;
  }

 private:
  const GradedAlgebra& A_;
  ActFn act_;
  DimFn dim_;
  std::map<std::pair<int, int>, std::vector<Matrix>> cache_;
  std::map<int, Matrix> lifts_;
};

// Shared machinery for building differentials degree by degree.
struct Context {
  const GradedAlgebra& A;
  const GradedModule& M;
  Field f;
  MultTable tabR, tabM;
  std::map<int, std::vector<Matrix>> actR;  // actR[t][l] = x_l : R_t -> R_{t+1}

  Context(const GradedAlgebra& a, const GradedModule& m)
      : A(a),
        M(m),
        f(a.field()),
        tabR(a, [&a](int l, int s) { return a.action(l, s); }, [&a](int s) { return a.dim(s); }),
        tabM(a, [&m](int l, int s) { return m.action(l, s); }, [&m](int s) { return m.dim(s); }) {}

  const Matrix& act(int l, int t) {
    auto it = actR.find(t);
    if (it == actR.end()) {
      std::vector<Matrix> v;
      for (int ll = 0; ll < A.e; ++ll) v.push_back(A.action(ll, t));
      it = actR.emplace(t, std::move(v)).first;
    }
    return it->second[std::size_t(l)];
  }
};

// Matrix of d_i in degree j: columns for (g, beta in R_{j - deg g}) of the source, rows in the target.
// tgt_degs == nullptr means the target is the module M.
Matrix assemble(Context& c, const ResolutionStep& src, const std::vector<int>* tgt_degs, int j) {
  const Field& f = c.f;
  const std::uint64_t p = f.p();
  std::vector<int> sdegs = src.gen_degrees();
  FreeLayout Ls = free_layout(c.A, sdegs, j);
  FreeLayout Lt;
  std::size_t ntgt;
  if (tgt_degs) {
    Lt = free_layout(c.A, *tgt_degs, j);
    ntgt = Lt.total;
  } else {
    ntgt = c.M.dim(j);
  }
  Matrix D(ntgt, Ls.total);
  if (ntgt == 0 || Ls.total == 0) return D;
  std::size_t g = 0;
  for (const auto& blk : src.blocks) {
    const int a = blk.deg;
    const int t = j - a;
    if (t < 0 || c.A.dim(t) == 0) {
      g += blk.images.rows;
      continue;
    }
    if (!tgt_degs) {
      const auto& tab = c.tabM.get(t, a);
      for (std::size_t r = 0; r < blk.images.rows; ++r, ++g) {
        Vec z(blk.images.row(r), blk.images.row(r) + blk.images.cols);
        for (std::size_t beta = 0; beta < tab.size(); ++beta) {
          Vec col = mul_vec(f, tab[beta], z);
          for (std::size_t k = 0; k < ntgt; ++k) D(k, Ls.off[g] + beta) = col[k];
        }
      }
      continue;
    }
    FreeLayout La = free_layout(c.A, *tgt_degs, a);
    // Per target generator: the multiplication table R_s -> R_{s+t}.
    std::vector<const std::vector<Matrix>*> tabs(tgt_degs->size(), nullptr);
    for (std::size_t gp = 0; gp < tgt_degs->size(); ++gp)
      if (La.len[gp] > 0 && Lt.len[gp] > 0) tabs[gp] = &c.tabR.get(t, a - (*tgt_degs)[gp]);
    for (std::size_t r = 0; r < blk.images.rows; ++r, ++g) {
      const Scalar* z = blk.images.row(r);
      for (std::size_t gp = 0; gp < tgt_degs->size(); ++gp) {
        if (!tabs[gp]) continue;
        const Scalar* seg = z + La.off[gp];
        const std::size_t n1 = La.len[gp], n2 = Lt.len[gp];
        bool nz = false;
        for (std::size_t k = 0; k < n1 && !nz; ++k) nz = seg[k] != 0;
        if (!nz) continue;
        const auto& tab = *tabs[gp];
        for (std::size_t beta = 0; beta < tab.size(); ++beta) {
          const Matrix& T = tab[beta];
          for (std::size_t rr = 0; rr < n2; ++rr) {
            const Scalar* tr = T.row(rr);
            std::uint64_t acc = 0;
            for (std::size_t k = 0; k < n1; ++k) acc += std::uint64_t(tr[k]) * seg[k] % p;
            D(Lt.off[gp] + rr, Ls.off[g] + beta) = Scalar(acc % p);
          }
        }
      }
    }
  }
  return D;
}

// Rows x_l z for z in the rows of Z (vectors of (F)_{j-1}), all l, as vectors of (F)_j.
Matrix multiply_rows(Context& c, const std::vector<int>& degs, const Matrix& Z, int j) {
  const std::uint64_t p = c.f.p();
  FreeLayout L1 = free_layout(c.A, degs, j - 1), L2 = free_layout(c.A, degs, j);
  Matrix U(std::size_t(c.A.e) * Z.rows, L2.total);
  for (int l = 0; l < c.A.e; ++l)
    for (std::size_t r = 0; r < Z.rows; ++r) {
      const Scalar* z = Z.row(r);
      Scalar* out = U.row(std::size_t(l) * Z.rows + r);
      for (std::size_t g = 0; g < degs.size(); ++g) {
        if (L1.len[g] == 0 || L2.len[g] == 0) continue;
        const Matrix& X = c.act(l, j - 1 - degs[g]);
        for (std::size_t rr = 0; rr < L2.len[g]; ++rr) {
          std::uint64_t acc = 0;
          for (std::size_t k = 0; k < L1.len[g]; ++k) acc += std::uint64_t(X(rr, k)) * z[L1.off[g] + k] % p;
          out[L2.off[g] + rr] = Scalar(acc % p);
        }
      }
    }
  return U;
}

// Lower bound for dim R_1 Z where Z = ker(D) in (F)_{j-1} (all of (F)_{j-1} when D is null), from the forms y_1..y_s:
// dim(y_1 Z + ... + y_s Z) = s dim Z - dim(K ∩ Z^s) with K the kernel of (z_1..z_s) -> sum y_k z_k, and
// K ∩ Z^s = ker(D applied to each component, restricted to K). K splits over the generators.
std::size_t certificate_rank(Context& c, const std::vector<int>& degs, const Matrix* D, std::size_t zdim, int j,
                             const std::vector<Vec>& forms) {
  const Field& f = c.f;
  const std::size_t s = forms.size();
  FreeLayout L1 = free_layout(c.A, degs, j - 1);
  std::map<int, Matrix> ker_by_t;
  std::vector<std::pair<std::size_t, const Matrix*>> blocks;  // (offset, kernel rows of length s * len)
  std::size_t dimK = 0;
  for (std::size_t g = 0; g < degs.size(); ++g) {
    if (L1.len[g] == 0) continue;
    const int t = j - 1 - degs[g];
    auto it = ker_by_t.find(t);
    if (it == ker_by_t.end()) {
      Matrix Y = linear_form_action(c.A, forms[0], t);
      for (std::size_t k = 1; k < s; ++k) Y = hstack(Y, linear_form_action(c.A, forms[k], t));
      it = ker_by_t.emplace(t, Y.rows == 0 ? Matrix::identity(s * L1.len[g]) : kernel_rows(f, Y)).first;
    }
    blocks.emplace_back(L1.off[g], &it->second);
    dimK += it->second.rows;
  }
  std::size_t rk = 0;
  if (D && D->rows > 0 && dimK > 0) {
    const std::uint64_t p = f.p();
    Matrix DK(s * D->rows, dimK);
    std::size_t col = 0;
    for (const auto& [off, K] : blocks) {
      const std::size_t len = K->cols / s;
      for (std::size_t k = 0; k < K->rows; ++k, ++col)
        for (std::size_t b = 0; b < s; ++b) {
          const Scalar* kv = K->row(k) + b * len;
          for (std::size_t r = 0; r < D->rows; ++r) {
            const Scalar* dr = D->row(r) + off;
            std::uint64_t acc = 0;
            for (std::size_t q = 0; q < len; ++q) acc += std::uint64_t(dr[q]) * kv[q] % p;
            DK(b * D->rows + r, col) = Scalar(acc % p);
          }
        }
    }
    rk = rank(f, DK);
  }
  const std::size_t lb = s * zdim + rk;
  return lb > dimK ? lb - dimK : 0;
}

// Certificate search: each candidate form alone, then the best one paired with another candidate.
std::size_t best_certificate(Context& c, const std::vector<int>& degs, const Matrix* D, std::size_t zdim, int j,
                             const std::vector<Vec>& ys, std::size_t target, const Vec** ybest) {
  std::size_t best = 0;
  *ybest = &ys.front();
  for (const auto& y : ys) {
    const std::size_t lb = certificate_rank(c, degs, D, zdim, j, {y});
    if (lb > best) best = lb, *ybest = &y;
    if (lb >= target) return lb;
  }
  if (ys.size() > 1 && target - best <= 2) {
    const Vec& other = *ybest == &ys.front() ? ys[1] : ys.front();
    best = std::max(best, certificate_rank(c, degs, D, zdim, j, {**ybest, other}));
  }
  return best;
}

std::vector<Vec> certificate_candidates(const GradedAlgebra& A) {
  std::vector<Vec> ys;
  Vec last(std::size_t(A.e), 0), first(std::size_t(A.e), 0);
  last[std::size_t(A.e - 1)] = 1;
  first[0] = 1;
  ys.push_back(last);
  if (A.e > 1) ys.push_back(first);
  std::mt19937_64 rng(0x5eed);
  for (int k = 0; k < 2; ++k) {
    Vec y(std::size_t(A.e));
    for (auto& v : y) v = Scalar(rng() % A.prime);
    ys.push_back(y);
  }
  return ys;
}

// Rows y z for z in the rows of Z (vectors of (F)_{j-1}), as vectors of (F)_j.
Matrix form_rows(Context& c, const std::vector<int>& degs, const Matrix& Z, int j, const Vec& y) {
  const std::uint64_t p = c.f.p();
  FreeLayout L1 = free_layout(c.A, degs, j - 1), L2 = free_layout(c.A, degs, j);
  std::map<int, Matrix> Y;
  Matrix U(Z.rows, L2.total);
  for (std::size_t g = 0; g < degs.size(); ++g) {
    if (L1.len[g] == 0 || L2.len[g] == 0) continue;
    const int t = j - 1 - degs[g];
    auto it = Y.find(t);
    if (it == Y.end()) it = Y.emplace(t, linear_form_action(c.A, y, t)).first;
    const Matrix& X = it->second;
    for (std::size_t r = 0; r < Z.rows; ++r) {
      const Scalar* z = Z.row(r) + L1.off[g];
      Scalar* out = U.row(r) + L2.off[g];
      for (std::size_t rr = 0; rr < L2.len[g]; ++rr) {
        std::uint64_t acc = 0;
        for (std::size_t k = 0; k < L1.len[g]; ++k) acc += std::uint64_t(X(rr, k)) * z[k] % p;
        out[rr] = Scalar(acc % p);
      }
    }
  }
  return U;
}

// Lower bound for dim R_1 Z: rank of y Z together with `extra` random elements y' z' of R_1 Z.
std::size_t sketch_rank(Context& c, const std::vector<int>& degs, const Matrix& Z, int j, const Vec& y,
                        std::size_t extra) {
  const Field& f = c.f;
  const std::uint64_t p = f.p();
  std::mt19937_64 rng(0x5eed + std::uint64_t(j));
  Matrix W = form_rows(c, degs, Z, j, y);
  for (std::size_t k = 0; k < extra; ++k) {
    Matrix R(1, Z.cols);
    std::vector<std::uint64_t> acc(Z.cols, 0);
    for (std::size_t r = 0; r < Z.rows; ++r) {
      const std::uint64_t cr = rng() % p;
      const Scalar* z = Z.row(r);
      for (std::size_t t = 0; t < Z.cols; ++t)
        if (z[t]) acc[t] = (acc[t] + cr * z[t]) % p;
    }
    for (std::size_t t = 0; t < Z.cols; ++t) R(0, t) = Scalar(acc[t]);
    Vec yr(std::size_t(c.A.e));
    for (auto& v : yr) v = Scalar(rng() % p);
    W = vstack(W, form_rows(c, degs, R, j, yr));
  }
  const std::size_t rk = rank(f, W);
  return rk;
}

// Lower bound for rank D: D times a block-diagonal random matrix (one column per source generator),
// plus dense random combinations of all columns until there are rows + 4 sketch columns.
std::size_t column_sketch_rank(const Field& f, const Matrix& D, const FreeLayout& L) {
  const std::uint64_t p = f.p();
  std::mt19937_64 rng(0xc0105eed);
  std::vector<std::size_t> blocks;
  for (std::size_t g = 0; g < L.len.size(); ++g)
    if (L.len[g] > 0) blocks.push_back(g);
  const std::size_t want = D.rows + 4;
  const std::size_t dense = want > blocks.size() ? want - blocks.size() : 0;
  Matrix W(D.rows, blocks.size() + dense);
  std::vector<std::uint64_t> w;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const std::size_t off = L.off[blocks[b]], len = L.len[blocks[b]];
    w.resize(len);
    for (auto& v : w) v = rng() % p;
    for (std::size_t r = 0; r < D.rows; ++r) {
      const Scalar* d = D.row(r) + off;
      std::uint64_t acc = 0;
      for (std::size_t k = 0; k < len; ++k) acc += d[k] * w[k] % p;
      W(r, b) = Scalar(acc % p);
    }
  }
  w.resize(D.cols);
  for (std::size_t k = 0; k < dense; ++k) {
    for (auto& v : w) v = rng() % p;
    for (std::size_t r = 0; r < D.rows; ++r) {
      const Scalar* d = D.row(r);
      std::uint64_t acc = 0;
      for (std::size_t t = 0; t < D.cols; ++t) acc = (acc + d[t] * w[t]) % p;
      W(r, blocks.size() + k) = Scalar(acc);
    }
  }
  return rank(f, W);
}

// Per-degree state of ker(d) while scanning one step.
struct DegreeState {
  int j = INT_MIN;
  std::size_t nsrc = 0, zdim = 0;
  bool full = false;
  bool have_D = false;
  Matrix D;
  bool have_Z = false;
  Matrix Z;
  bool z_is_last_block = false;
};

int full_bound(const GradedAlgebra& A, const GradedModule& M, int m) {
  return M.top() + m * std::max(1, A.top());
}

}  // namespace

int max_safe_window(const GradedAlgebra& A, const GradedModule& M, int m) {
  if (A.exact && M.exact) return full_bound(A, M, m);
  int b = INT_MAX;
  if (!A.exact) b = A.D + M.indeg();
  if (!M.exact) b = std::min(b, M.top());
  return b;
}

ResolutionSlice minimal_resolution(const GradedAlgebra& A, const GradedModule& M, int m, int J) {
  ResolutionOptions o;
  o.J = J;
  return minimal_resolution(A, M, m, o);
}

ResolutionSlice minimal_resolution(const GradedAlgebra& A, const GradedModule& M, int m, ResolutionOptions opt) {
  if (m < 0) throw std::invalid_argument("minimal_resolution: m must be nonnegative");
  if (M.prime != A.prime || M.e != A.e) throw std::invalid_argument("minimal_resolution: module over a different algebra");
  const int Jmax = max_safe_window(A, M, m);
  const int J = opt.J < 0 ? Jmax : opt.J;
  if (J > Jmax) throw WindowError("minimal_resolution: window " + std::to_string(J) + " not reachable", Jmax);

  ResolutionSlice S;
  S.prime = A.prime;
  S.e = A.e;
  S.m = m;
  S.J = J;
  S.indeg = M.indeg();
  S.complete = A.exact && M.exact && J >= full_bound(A, M, m);
  S.steps.resize(std::size_t(m) + 1);
  S.kernel_dims.resize(std::size_t(m) + 1);

  Context c(A, M);
  const Field& f = c.f;
  const auto ys = certificate_candidates(A);

  // Step 0: minimal generators of M.
  {
    ResolutionStep& st = S.steps[0];
    for (int j = M.lowdeg; j <= std::min(J, M.top()); ++j) {
      const std::size_t n = M.dim(j);
      if (n == 0) continue;
      S.kernel_dims[0][j] = n;
      Matrix U(0, n);
      if (j > M.lowdeg && M.dim(j - 1) > 0)
        for (int l = 0; l < A.e; ++l) U = vstack(U, transpose(M.action(l, j - 1)));
      RrefResult rs = U.rows == 0 ? RrefResult{Matrix(0, n), {}} : row_space(f, U);
      std::vector<char> piv(n, 0);
      for (auto p : rs.pivots) piv[p] = 1;
      GenBlock b{j, Matrix(n - rs.pivots.size(), n)};
      std::size_t r = 0;
      for (std::size_t k = 0; k < n; ++k)
        if (!piv[k]) b.images(r++, k) = 1;
      if (b.images.rows) {
        st.betti[j] = b.images.rows;
        st.blocks.push_back(std::move(b));
      }
    }
  }

  int last = 0;
  for (int i = 1; i <= m; ++i) {
    const ResolutionStep& src = S.steps[std::size_t(i - 1)];
    ResolutionStep& st = S.steps[std::size_t(i)];
    last = i;
    st.materialized = i < m || opt.last_differential;
    if (src.blocks.empty()) continue;
    const std::vector<int> sdegs = src.gen_degrees();
    std::vector<int> tdegs;
    if (i >= 2) tdegs = S.steps[std::size_t(i - 2)].gen_degrees();
    const std::vector<int>* tgt = i >= 2 ? &tdegs : nullptr;
    DegreeState prev;
    for (int j = sdegs.front() + 1; j <= J; ++j) {
      DegreeState cur;
      cur.j = j;
      FreeLayout Ls = free_layout(A, sdegs, j);
      cur.nsrc = Ls.total;
      const std::size_t ntgt = tgt ? free_layout(A, tdegs, j).total : M.dim(j);
      if (cur.nsrc == 0) {
        cur.zdim = 0;
      } else if (ntgt == 0) {
        cur.full = true;
        cur.zdim = cur.nsrc;
      } else {
        cur.D = assemble(c, src, tgt, j);
        cur.have_D = true;
        if (st.materialized) {
          cur.Z = kernel_rows(f, cur.D);
          cur.have_Z = true;
          cur.zdim = cur.Z.rows;
        } else {
          cur.zdim = cur.nsrc - rank(f, cur.D);
        }
      }
      if (cur.zdim > 0) S.kernel_dims[std::size_t(i)][j] = cur.zdim;

      // U = R_1 Z_{j-1}.
      std::size_t rankU = 0;
      bool certified = false;
      RrefResult Urs;
      if (prev.j == j - 1 && prev.zdim > 0 && cur.zdim > 0) {
        const double rowsU = double(A.e) * double(prev.zdim), cols = double(cur.nsrc);
        const Matrix* Zp = nullptr;
        Matrix tmp;
        auto kernel_prev = [&] {
          if (Zp) return;
          if (prev.full) {
            tmp = Matrix::identity(prev.nsrc);
            Zp = &tmp;
          } else if (prev.z_is_last_block) {
            Zp = &st.blocks.back().images;
          } else {
            if (!prev.have_Z) {
              prev.Z = kernel_rows(f, prev.D);
              prev.have_Z = true;
            }
            Zp = &prev.Z;
          }
        };
        if (rowsU * cols * std::min(rowsU, cols) > opt.certificate_cost) {
          const Vec* ybest = nullptr;
          const std::size_t best =
              best_certificate(c, sdegs, prev.have_D ? &prev.D : nullptr, prev.zdim, j, ys, cur.zdim, &ybest);
          if (best == cur.zdim) {
            certified = true;
            rankU = cur.zdim;
          }
          if (!certified && cur.zdim - best + 2 <= cur.zdim / 4) {
            kernel_prev();
            if (sketch_rank(c, sdegs, *Zp, j, *ybest, cur.zdim - best + 2) == cur.zdim) {
              certified = true;
              rankU = cur.zdim;
            }
          }
        }
        if (!certified) {
          kernel_prev();
          Matrix U = multiply_rows(c, sdegs, *Zp, j);
          Urs = row_space(f, U);
          rankU = Urs.pivots.size();
        }
      }
      if (rankU > cur.zdim) throw std::logic_error("minimal_resolution: R_1 Z exceeds Z");
      const std::size_t beta = cur.zdim - rankU;
      if (beta > 0) {
        st.betti[j] = beta;
        if (st.materialized) {
          GenBlock b{j, Matrix()};
          if (cur.full) {
            std::vector<char> piv(cur.nsrc, 0);
            for (auto p : Urs.pivots) piv[p] = 1;
            b.images = Matrix(beta, cur.nsrc);
            std::size_t r = 0;
            for (std::size_t k = 0; k < cur.nsrc; ++k)
              if (!piv[k]) b.images(r++, k) = 1;
          } else if (rankU == 0) {
            b.images = std::move(cur.Z);
            cur.have_Z = false;
            cur.z_is_last_block = true;
          } else {
            // Reduce Z modulo the echelon basis of U, then keep an echelon basis of what is left.
            Matrix Zr = cur.Z;
            const std::uint64_t p = f.p();
            for (std::size_t r = 0; r < Zr.rows; ++r) {
              Scalar* z = Zr.row(r);
              for (std::size_t t = 0; t < Urs.pivots.size(); ++t) {
                const Scalar coef = z[Urs.pivots[t]];
                if (coef == 0) continue;
                const Scalar neg = f.neg(coef);
                const Scalar* u = Urs.matrix.row(t);
                for (std::size_t k = 0; k < Zr.cols; ++k)
                  if (u[k]) z[k] = Scalar((z[k] + std::uint64_t(neg) * u[k]) % p);
              }
            }
            RrefResult g = row_space(f, Zr);
            if (g.pivots.size() != beta) throw std::logic_error("minimal_resolution: generator count mismatch");
            b.images = std::move(g.matrix);
          }
          st.blocks.push_back(std::move(b));
        }
      }
      prev = std::move(cur);
    }
    if (opt.stop_when_nonlinear && !S.linear_through(i)) {
      S.stopped_early = true;
      break;
    }
  }
  if (S.stopped_early) {
    S.m = last;
    S.steps.resize(std::size_t(last) + 1);
    S.kernel_dims.resize(std::size_t(last) + 1);
    S.complete = A.exact && M.exact && J >= full_bound(A, M, last);
  }
  return S;
}

ResolutionSlice resolution_of_k(const GradedAlgebra& A, int m) { return minimal_resolution(A, residue_field(A), m); }

namespace {

std::string algebra_key(const GradedAlgebra& A) {
  std::ostringstream os;
  os << A.prime << ':' << A.e << ':' << A.D << ':' << A.exact << ':';
  for (auto d : A.dims) os << d << ',';
  for (const auto& per : A.act)
    for (const auto& mtx : per) {
      os << '|';
      for (auto v : mtx.a) os << v << ',';
    }
  return os.str();
}

}  // namespace

std::shared_ptr<const ResolutionSlice> KResolutionCache::get(const GradedAlgebra& A, int m) {
  const std::string key = algebra_key(A);
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = slices_.find(key);
    if (it != slices_.end() && it->second->m >= m) return it->second;
  }
  auto s = std::make_shared<const ResolutionSlice>(resolution_of_k(A, m));
  std::lock_guard<std::mutex> lk(mu_);
  auto& slot = slices_[key];
  if (!slot || slot->m < s->m) slot = s;
  return slot;
}

KResolutionCache& default_k_cache() {
  static KResolutionCache cache;
  return cache;
}

// ---------------------------------------------------------------- linearity tests

bool is_m_step_linear(const GradedAlgebra& A, const GradedModule& M, int m) {
  ResolutionOptions o;
  o.stop_when_nonlinear = true;
  o.last_differential = false;
  ResolutionSlice S = minimal_resolution(A, M, m, o);
  if (!S.linear_through(m)) return false;
  if (!S.complete) throw WindowError("is_m_step_linear: linearity cannot be certified on the window", S.J);
  return true;
}

namespace {

bool is_short_module(const GradedModule& M) {
  if (!M.exact) return false;
  const int d = M.indeg();
  for (int j = M.lowdeg; j <= M.top(); ++j)
    if (j != d && j != d + 1 && M.dim(j) != 0) return false;
  return true;
}

}  // namespace

bool short_linear_criterion(const GradedAlgebra& A, const GradedModule& M, int m) {
  if (!A.is_short()) throw PreconditionError("short_linear_criterion: algebra is not short");
  if (!is_short_module(M) || M.indeg() != 0) throw PreconditionError("short_linear_criterion: module must be short with indeg 0");
  if (!koszul_to_step(A, m).koszul) throw PreconditionError("short_linear_criterion: algebra is not Koszul to step m");
  ResolutionOptions o;
  o.J = m + 1;
  o.last_differential = false;
  return minimal_resolution(A, M, m, o).betti(m, m + 1) == 0;
}

Matrix delta_matrix(const GradedAlgebra& A, const ResolutionSlice& kres, const ShortTable& T, int i) {
  if (i < 1 || i > kres.m || !kres.steps[std::size_t(i)].materialized)
    throw std::invalid_argument("delta_matrix: resolution of k does not reach step i");
  const Field f = A.field();
  const std::size_t bi = kres.steps[std::size_t(i)].total(), bi1 = kres.steps[std::size_t(i - 1)].total();
  const std::size_t p = std::size_t(T.p), q = std::size_t(T.q);
  std::vector<Matrix> B;
  for (int l = 0; l < A.e; ++l) {
    Matrix b(q, p);
    for (std::size_t n = 0; n < p; ++n)
      for (std::size_t h = 0; h < q; ++h) b(h, n) = T.C(T.row(l, int(n)), h);
    B.push_back(std::move(b));
  }
  Matrix delta(q * bi1, p * bi);
  const auto& blocks = kres.steps[std::size_t(i)].blocks;
  if (blocks.size() != 1 || blocks[0].deg != i) throw std::invalid_argument("delta_matrix: resolution of k is not linear at step i");
  const Matrix& img = blocks[0].images;
  if (img.cols != bi1 * std::size_t(A.e)) throw std::invalid_argument("delta_matrix: unexpected differential shape");
  const std::uint64_t P = f.p();
  for (std::size_t g = 0; g < bi; ++g)
    for (std::size_t gp = 0; gp < bi1; ++gp) {
      const Scalar* gamma = img.row(g) + gp * std::size_t(A.e);
      for (std::size_t h = 0; h < q; ++h)
        for (std::size_t n = 0; n < p; ++n) {
          std::uint64_t acc = 0;
          for (int l = 0; l < A.e; ++l) acc += std::uint64_t(gamma[l]) * B[std::size_t(l)](h, n) % P;
          delta(gp * q + h, g * p + n) = Scalar(acc % P);
        }
    }
  return delta;
}

bool delta_linearity_test(const GradedAlgebra& A, const ResolutionSlice& kres, const ShortTable& T, int m) {
  if (T.e != A.e || T.prime != A.prime) throw std::invalid_argument("delta_linearity_test: table does not match the algebra");
  if (kres.m < m + 1 || !kres.linear_through(m + 1))
    throw std::invalid_argument("delta_linearity_test: resolution of k must be linear through step m+1");
  const Field f = A.field();
  for (int i = 1; i <= m + 1; ++i) {
    Matrix d = delta_matrix(A, kres, T, i);
    if (rank(f, d) != d.rows) return false;
  }
  return true;
}

KoszulReport koszul_to_step(const GradedAlgebra& A, int m) {
  KoszulReport rep;
  rep.slice = default_k_cache().get(A, m);
  const ResolutionSlice& S = *rep.slice;
  rep.koszul = S.linear_through(m);
  if (rep.koszul && !S.complete) throw WindowError("koszul_to_step: linearity cannot be certified on the window", S.J);
  std::vector<std::int64_t> pk;
  for (int i = 0; i <= m; ++i) pk.push_back(std::int64_t(S.steps[std::size_t(i)].total()));
  rep.product = koszul_product(PowerSeries{LaurentPoly(0, pk), m + 1}, hilbert(A));
  return rep;
}

// ---------------------------------------------------------------- structural checks

bool euler_check(const GradedAlgebra& A, const GradedModule& M, const ResolutionSlice& S) {
  for (int j = S.indeg; j <= S.J; ++j) {
    if (!M.known(j)) break;
    std::int64_t acc = 0;
    for (int i = 0; i <= S.m; ++i) {
      const std::int64_t sign = i % 2 ? -1 : 1;
      for (const auto& [a, c] : S.steps[std::size_t(i)].betti)
        if (a <= j) acc += sign * std::int64_t(c) * std::int64_t(A.dim(j - a));
    }
    const std::int64_t L = std::int64_t(S.syzygy_dim(A, j));
    acc += (S.m % 2 ? 1 : -1) * L;
    if (acc != std::int64_t(M.dim(j))) return false;
  }
  return true;
}

StructureReport verify_slice(const GradedAlgebra& A, const GradedModule& M, const ResolutionSlice& S,
                             double certificate_cost) {
  StructureReport rep;
  Context c(A, M);
  const Field& f = c.f;
  auto fail = [&](bool& flag, const std::string& what) {
    flag = false;
    if (rep.detail.empty()) rep.detail = what;
  };
  const auto ys = certificate_candidates(A);
  int top_step = S.m;
  while (top_step > 0 && !S.steps[std::size_t(top_step)].materialized) --top_step;

  for (int i = 0; i <= top_step; ++i) {
    const auto tdegs = i ? S.steps[std::size_t(i - 1)].gen_degrees() : std::vector<int>{};
    std::size_t count = 0;
    for (const auto& b : S.steps[std::size_t(i)].blocks) {
      const std::size_t n = i ? free_layout(A, tdegs, b.deg).total : M.dim(b.deg);
      if (b.images.cols != n) {
        rep.minimal = false;
        rep.detail = "d_" + std::to_string(i) + " has the wrong shape";
        return rep;
      }
      count += b.images.rows;
    }
    if (count != S.steps[std::size_t(i)].total()) {
      rep.minimal = false;
      rep.detail = "generator count of F_" + std::to_string(i) + " disagrees with its Betti numbers";
      return rep;
    }
  }

  // Minimality: d_0 images are independent modulo R_1 M; higher images have no unit components.
  for (const auto& b : S.steps[0].blocks) {
    Matrix U(0, M.dim(b.deg));
    if (b.deg > M.lowdeg && M.dim(b.deg - 1) > 0)
      for (int l = 0; l < A.e; ++l) U = vstack(U, transpose(M.action(l, b.deg - 1)));
    const std::size_t ru = U.rows ? rank(f, U) : 0;
    if (rank(f, vstack(U, b.images)) != ru + b.images.rows) fail(rep.minimal, "d_0 generators not minimal");
  }
  for (int i = 1; i <= top_step; ++i) {
    const auto tdegs = S.steps[std::size_t(i - 1)].gen_degrees();
    for (const auto& b : S.steps[std::size_t(i)].blocks) {
      FreeLayout L = free_layout(A, tdegs, b.deg);
      for (std::size_t gp = 0; gp < tdegs.size(); ++gp) {
        if (tdegs[gp] != b.deg) continue;
        for (std::size_t r = 0; r < b.images.rows; ++r)
          for (std::size_t k = 0; k < L.len[gp]; ++k)
            if (b.images(r, L.off[gp] + k) != 0) fail(rep.minimal, "unit entry in d_" + std::to_string(i));
      }
    }
  }

  // d_{i-1} d_i = 0 on generators.
  for (int i = 1; i <= top_step; ++i) {
    std::vector<int> tdegs;
    if (i >= 2) tdegs = S.steps[std::size_t(i - 2)].gen_degrees();
    for (const auto& b : S.steps[std::size_t(i)].blocks) {
      Matrix D = assemble(c, S.steps[std::size_t(i - 1)], i >= 2 ? &tdegs : nullptr, b.deg);
      if (D.rows == 0) continue;
      if (!mul(f, D, transpose(b.images)).is_zero()) fail(rep.dd_zero, "d_" + std::to_string(i - 1) + " d_" + std::to_string(i) + " != 0");
    }
  }

  // Exactness: image of d_{i+1} fills ker d_i in every degree of the window (d_0 onto M).
  // Exact ranks of (d_i)_j, shared between the kernel side and the image side.
  std::map<std::pair<int, int>, std::size_t> ranks;
  auto exact_rank = [&](int i, int j, const Matrix& D) {
    const auto key = std::make_pair(i, j);
    auto it = ranks.find(key);
    if (it != ranks.end()) return it->second;
    const std::size_t r = D.rows && D.cols ? rank(f, D) : 0;
    ranks.emplace(key, r);
    return r;
  };
  for (int j = S.indeg; j <= S.J && M.known(j); ++j) {
    Matrix D0 = assemble(c, S.steps[0], nullptr, j);
    const std::size_t rk = exact_rank(0, j, D0);
    if (rk != M.dim(j)) fail(rep.exact, "d_0 not onto M in degree " + std::to_string(j));
  }
  for (int i = 0; i + 1 <= top_step; ++i) {
    std::vector<int> tdegs;
    if (i >= 1) tdegs = S.steps[std::size_t(i - 1)].gen_degrees();
    const auto sdegs = S.steps[std::size_t(i)].gen_degrees();
    const auto udegs = S.steps[std::size_t(i + 1)].gen_degrees();
    if (sdegs.empty()) continue;
    Matrix Dprev;
    std::size_t kprev = 0;
    bool prev_ok = false;
    int prev_j = INT_MIN;
    for (int j = sdegs.front(); j <= S.J; ++j) {
      const FreeLayout Ls = free_layout(A, sdegs, j);
      const std::size_t nsrc = Ls.total;
      Matrix D = assemble(c, S.steps[std::size_t(i)], i >= 1 ? &tdegs : nullptr, j);
      // kdim = dim ker(d_i)_j is bounded above through a lower bound on rank D; exact when no bound is needed.
      bool kdim_exact = true;
      std::size_t kdim = nsrc;
      if (D.rows && D.cols) {
        const double rows = double(D.rows), cols = double(D.cols);
        if (!ranks.count({i, j}) && rows * cols * std::min(rows, cols) > certificate_cost && D.rows + 4 < D.cols) {
          kdim = nsrc - column_sketch_rank(f, D, Ls);
          kdim_exact = false;
        } else {
          kdim = nsrc - exact_rank(i, j, D);
        }
      }
      // Lower bound on rank(d_{i+1})_j; d_i d_{i+1} = 0 bounds it above by the true kernel dimension.
      const std::size_t nup = free_layout(A, udegs, j).total;
      bool has_new = std::find(udegs.begin(), udegs.end(), j) != udegs.end();
      std::size_t img = 0;
      bool done = false;
      if (!has_new && prev_ok && prev_j == j - 1 && kdim > 0) {
        const double rowsU = double(A.e) * double(kprev), cols = double(nsrc);
        if (rowsU * cols * std::min(rowsU, cols) > certificate_cost) {
          const Vec* ybest = nullptr;
          const std::size_t best =
              best_certificate(c, sdegs, Dprev.rows ? &Dprev : nullptr, kprev, j, ys, kdim, &ybest);
          if (best >= kdim) {
            img = best;
            done = true;
          }
          if (!done && kdim - best + 2 <= kdim / 4) {
            const Matrix Z = Dprev.rows ? kernel_rows(f, Dprev) : Matrix::identity(Dprev.cols);
            const std::size_t lb = sketch_rank(c, sdegs, Z, j, *ybest, kdim - best + 2);
            if (lb >= kdim) {
              img = lb;
              done = true;
            }
          }
        }
      }
      if (!done && nup > 0) {
        Matrix Dup = assemble(c, S.steps[std::size_t(i + 1)], &sdegs, j);
        img = exact_rank(i + 1, j, Dup);
      }
      // With d_i d_{i+1} = 0, img <= dim ker <= kdim, so img >= kdim proves equality.
      if ((img < kdim || !rep.dd_zero) && !kdim_exact) {
        kdim = nsrc - exact_rank(i, j, D);
        kdim_exact = true;
      }
      const bool ok = kdim_exact ? img == kdim : img >= kdim;
      if (!ok) fail(rep.exact, "not exact at F_" + std::to_string(i) + " in degree " + std::to_string(j));
      // Exact here with d d = 0 forces rank(d_{i+1})_j = dim ker(d_i)_j = kdim.
      if (ok && rep.dd_zero) ranks.emplace(std::make_pair(i + 1, j), kdim);
      prev_ok = ok;
      prev_j = j;
      kprev = kdim;
      Dprev = std::move(D);
    }
  }
  return rep;
}

// ---------------------------------------------------------------- duals and syzygies

GradedModule syzygy_module(const GradedAlgebra& A, const ResolutionSlice& S, int i) {
  if (i < 1 || i > S.m || !S.steps[std::size_t(i)].materialized)
    throw std::out_of_range("syzygy_module: step not recorded");
  GradedModule M0 = residue_field(A);
  Context c(A, M0);
  const Field& f = c.f;
  const auto& st = S.steps[std::size_t(i)];
  const auto tdegs = S.steps[std::size_t(i - 1)].gen_degrees();
  GradedModule out;
  out.prime = A.prime;
  out.e = A.e;
  out.exact = S.complete;
  if (st.blocks.empty()) {
    out.lowdeg = 0;
    out.dims = {0};
    out.act.assign(std::size_t(A.e), {});
    return out;
  }
  const int lo = st.blocks.front().deg;
  int hi = S.J;
  if (S.complete) hi = std::min(hi, st.blocks.back().deg + A.top());
  std::vector<RrefResult> bases;
  for (int j = lo; j <= hi; ++j) {
    Matrix D = assemble(c, st, &tdegs, j);
    const std::size_t n = free_layout(A, tdegs, j).total;
    bases.push_back(D.rows && D.cols ? row_space(f, transpose(D)) : RrefResult{Matrix(0, n), {}});
  }
  while (bases.size() > 1 && bases.back().pivots.empty() && S.complete) {
    bases.pop_back();
    --hi;
  }
  out.lowdeg = lo;
  for (const auto& b : bases) out.dims.push_back(b.pivots.size());
  out.act.assign(std::size_t(A.e), {});
  for (int j = lo; j < hi; ++j) {
    const auto& B = bases[std::size_t(j - lo)];
    const auto& B1 = bases[std::size_t(j + 1 - lo)];
    for (int l = 0; l < A.e; ++l) {
      Matrix act(B1.pivots.size(), B.pivots.size());
      if (B.pivots.size() && B1.pivots.size()) {
        Matrix U(0, 0);
        // x_l applied to each basis vector, read off at the pivots of the next basis.
        FreeLayout L1 = free_layout(A, tdegs, j), L2 = free_layout(A, tdegs, j + 1);
        const std::uint64_t p = f.p();
        for (std::size_t k = 0; k < B.pivots.size(); ++k) {
          Vec v(L2.total, 0);
          const Scalar* z = B.matrix.row(k);
          for (std::size_t g = 0; g < tdegs.size(); ++g) {
            if (L1.len[g] == 0 || L2.len[g] == 0) continue;
            const Matrix& X = c.act(l, j - tdegs[g]);
            for (std::size_t rr = 0; rr < L2.len[g]; ++rr) {
              std::uint64_t acc = 0;
              for (std::size_t q = 0; q < L1.len[g]; ++q) acc += std::uint64_t(X(rr, q)) * z[L1.off[g] + q] % p;
              v[L2.off[g] + rr] = Scalar(acc % p);
            }
          }
          for (std::size_t t = 0; t < B1.pivots.size(); ++t) act(t, k) = v[B1.pivots[t]];
        }
      }
      out.act[std::size_t(l)].push_back(std::move(act));
    }
  }
  return out;
}

GradedModule graded_hom_dual(const GradedAlgebra& A, const GradedModule& N) {
  if (!A.exact || !N.exact) throw WindowError("graded_hom_dual: needs exact algebra and module", std::min(A.D, N.top()));
  if (N.prime != A.prime || N.e != A.e) throw std::invalid_argument("graded_hom_dual: module over a different algebra");
  const Field f = A.field();
  const int lo = N.lowdeg, hi = N.top(), T = A.top();
  const int tmin = -hi, tmax = T - lo;
  struct Piece {
    int t = 0;
    std::vector<std::size_t> off;  // per j in [lo, hi]
    std::size_t nvar = 0;
    RrefResult basis;
  };
  std::vector<Piece> pieces;
  for (int t = tmin; t <= tmax; ++t) {
    Piece P;
    P.t = t;
    for (int j = lo; j <= hi; ++j) {
      P.off.push_back(P.nvar);
      P.nvar += N.dim(j) * A.dim(j + t);
    }
    // phi_{j+1} B_l^{(j)} - A_l^{(j+t)} phi_j = 0 for all l, j.
    std::vector<Vec> eqs;
    for (int j = lo; j <= hi; ++j) {
      const std::size_t nj = N.dim(j), rt1 = A.dim(j + t + 1), rt = A.dim(j + t);
      if (nj == 0 || rt1 == 0) continue;
      const std::size_t nj1 = N.dim(j + 1);
      for (int l = 0; l < A.e; ++l) {
        Matrix B = N.action(l, j);
        Matrix X = A.action(l, j + t);
        for (std::size_t r = 0; r < rt1; ++r)
          for (std::size_t cc = 0; cc < nj; ++cc) {
            Vec eq(P.nvar, 0);
            if (j + 1 <= hi)
              for (std::size_t k = 0; k < nj1; ++k)
                if (B(k, cc)) {
                  auto& s = eq[P.off[std::size_t(j + 1 - lo)] + r * nj1 + k];
                  s = f.add(s, B(k, cc));
                }
            for (std::size_t k = 0; k < rt; ++k)
              if (X(r, k)) {
                auto& s = eq[P.off[std::size_t(j - lo)] + k * nj + cc];
                s = f.sub(s, X(r, k));
              }
            eqs.push_back(std::move(eq));
          }
      }
    }
    Matrix E = eqs.empty() ? Matrix(0, P.nvar) : Matrix::from_rows(eqs, P.nvar);
    Matrix K = P.nvar == 0 ? Matrix(0, 0) : (E.rows ? kernel_rows(f, E) : Matrix::identity(P.nvar));
    P.basis = K.rows ? row_space(f, K) : RrefResult{Matrix(0, P.nvar), {}};
    pieces.push_back(std::move(P));
  }
  std::size_t a = 0, b = pieces.size();
  while (a < b && pieces[a].basis.pivots.empty()) ++a;
  while (b > a && pieces[b - 1].basis.pivots.empty()) --b;
  GradedModule H;
  H.prime = A.prime;
  H.e = A.e;
  H.exact = true;
  if (a == b) {
    H.lowdeg = 0;
    H.dims = {0};
    H.act.assign(std::size_t(A.e), {});
    return H;
  }
  H.lowdeg = pieces[a].t;
  for (std::size_t k = a; k < b; ++k) H.dims.push_back(pieces[k].basis.pivots.size());
  H.act.assign(std::size_t(A.e), {});
  for (std::size_t k = a; k + 1 < b; ++k) {
    const Piece& P = pieces[k];
    const Piece& P1 = pieces[k + 1];
    for (int l = 0; l < A.e; ++l) {
      Matrix act(P1.basis.pivots.size(), P.basis.pivots.size());
      for (std::size_t v = 0; v < P.basis.pivots.size(); ++v) {
        // (x_l phi)_j = A_l^{(j+t)} phi_j.
        Vec w(P1.nvar, 0);
        const Scalar* phi = P.basis.matrix.row(v);
        for (int j = lo; j <= hi; ++j) {
          const std::size_t nj = N.dim(j), rt = A.dim(j + P.t), rt1 = A.dim(j + P.t + 1);
          if (nj == 0 || rt == 0 || rt1 == 0) continue;
          Matrix X = A.action(l, j + P.t);
          for (std::size_t r = 0; r < rt1; ++r)
            for (std::size_t cc = 0; cc < nj; ++cc) {
              std::uint64_t acc = 0;
              for (std::size_t q = 0; q < rt; ++q) acc += std::uint64_t(X(r, q)) * phi[P.off[std::size_t(j - lo)] + q * nj + cc] % f.p();
              w[P1.off[std::size_t(j - lo)] + r * nj + cc] = Scalar(acc % f.p());
            }
        }
        for (std::size_t t = 0; t < P1.basis.pivots.size(); ++t) act(t, v) = w[P1.basis.pivots[t]];
      }
      H.act[std::size_t(l)].push_back(std::move(act));
    }
  }
  return H;
}

bool is_short_gorenstein(const GradedAlgebra& A) {
  if (!A.is_short() || A.top() != 2 || A.dim(2) != 1) return false;
  Matrix G(std::size_t(A.e), std::size_t(A.e));
  for (int l = 0; l < A.e; ++l) {
    Matrix X = A.action(l, 1);
    for (int k = 0; k < A.e; ++k) G(std::size_t(l), std::size_t(k)) = X(0, std::size_t(k));
  }
  return rank(A.field(), G) == std::size_t(A.e);
}

GradedModule gorenstein_obstruction_module(const GradedAlgebra& A, int i) {
  if (!is_short_gorenstein(A)) throw PreconditionError("gorenstein_obstruction_module: algebra is not short Gorenstein");
  if (i < 1) throw std::invalid_argument("gorenstein_obstruction_module: need i >= 1");
  auto kres = default_k_cache().get(A, i);
  if (!kres->linear_through(i)) throw PreconditionError("gorenstein_obstruction_module: algebra is not Koszul to step i");
  GradedModule H = graded_hom_dual(A, syzygy_module(A, *kres, i));
  return shifted(H, i - 1);
}

int gorenstein_stopping_bound(const GradedAlgebra& A, int q) {
  if (!is_short_gorenstein(A)) throw PreconditionError("gorenstein_stopping_bound: algebra is not short Gorenstein");
  if (A.e == 2) return std::max(q - 1, 0);
  for (int m = 1;; m *= 2) {
    auto kres = default_k_cache().get(A, m);
    for (int i = 0; i <= m; ++i)
      if (kres->steps[std::size_t(i)].total() > std::size_t(std::max(q, 0))) return i;
  }
}

// ---------------------------------------------------------------- period two

Period2Report period2_cyclic_check(const GradedAlgebra& A, const Vec& a, int m) {
  Period2Report rep;
  if (!A.is_short() || A.dim(2) + 1 != std::size_t(A.e))
    throw PreconditionError("period2_cyclic_check: need a short algebra with H = 1 + e s + (e-1) s^2");
  if (a.size() != std::size_t(A.e)) throw std::invalid_argument("period2_cyclic_check: a has wrong length");
  if (!koszul_to_step(A, m).koszul) throw PreconditionError("period2_cyclic_check: algebra is not Koszul to step m");
  const Field f = A.field();
  if (std::all_of(a.begin(), a.end(), [](Scalar v) { return v == 0; })) {
    rep.detail = "a = 0";
    return rep;
  }
  // (0:a)_1 must be a line kb with b R_1 = R_2; then (0:b)_1 = ka and a R_1 = R_2.
  auto principal_partner = [&](const Vec& x) -> std::optional<Vec> {
    Matrix K = kernel_rows(f, linear_form_action(A, x, 1));
    if (K.rows != 1) return std::nullopt;
    Vec y(K.row(0), K.row(0) + K.cols);
    if (rank(f, linear_form_action(A, y, 1)) != A.dim(2)) return std::nullopt;
    return y;
  };
  auto b = principal_partner(a);
  if (!b) {
    rep.detail = "(0:a) is not principal";
    return rep;
  }
  auto a2 = principal_partner(*b);
  if (!a2 || rank(f, Matrix::from_rows({a, *a2}, a.size())) != 1) {
    rep.detail = "(0:b) differs from aR";
    return rep;
  }
  rep.witnessed = true;
  // Normalize b to have leading coefficient 1.
  Vec bn = *b;
  auto it = std::find_if(bn.begin(), bn.end(), [](Scalar v) { return v != 0; });
  const Scalar inv = f.inv(*it);
  for (auto& v : bn) v = f.mul(v, inv);
  rep.b = bn;
  GradedModule M = cyclic_quotient(A, {a});
  ResolutionOptions o;
  o.last_differential = false;
  ResolutionSlice S = minimal_resolution(A, M, m, o);
  rep.betti_constant = S.complete;
  for (int i = 0; i <= m; ++i) {
    rep.betti.push_back(S.steps[std::size_t(i)].total());
    if (rep.betti.back() != 1) rep.betti_constant = false;
  }
  return rep;
}

ShortTable lift_short_module(const GradedAlgebra& Q, const Vec& g, const GradedAlgebra& R, const ShortTable& T) {
  if (Q.prime != R.prime || Q.e != R.e || T.e != Q.e || T.prime != Q.prime)
    throw std::invalid_argument("lift_short_module: algebras and table must share e and the field");
  QuotientResult qr = quotient_by_element(Q, g);
  if (qr.R.dims != R.dims || qr.R.act != R.act) throw std::invalid_argument("lift_short_module: R is not Q/(g)");
  auto rep = validate_module(R, table_to_module(R, T));
  if (!rep.ok()) throw ValidationError("lift_short_module: " + rep.summary());
  return T;
}

}  // namespace kz
