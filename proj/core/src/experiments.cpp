#include "kz/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

#include "kz/errors.hpp"
#include "kz/io.hpp"

namespace kz {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) { return splitmix64(splitmix64(seed) ^ trial); }

std::string AlgebraSource::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::File: os << "file:" << path; break;
    case Kind::Conca: os << "conca:e=" << e << ":r=" << r << ":seed=" << seed; break;
    case Kind::Generic: os << "generic:e=" << e << ":seed=" << seed; break;
  }
  return os.str();
}

std::optional<GradedAlgebra> generic_short_algebra(int e, int nquadrics, std::uint32_t prime, std::mt19937_64& rng) {
  const std::size_t n2 = std::size_t(e) * std::size_t(e + 1) / 2;
  QuadricPresentation P{e, {}};
  for (int k = 0; k < nquadrics; ++k) {
    Vec v(n2);
    for (auto& c : v) c = Scalar(rng() % prime);
    P.quadrics.push_back(std::move(v));
  }
  try {
    return truncate(from_quadrics(P, 2, prime), 2);
  } catch (const ValidationError&) {
    return std::nullopt;
  }
}

GradedAlgebra make_algebra(const AlgebraSource& src, std::uint32_t prime) {
  std::mt19937_64 rng(src.seed);
  switch (src.kind) {
    case AlgebraSource::Kind::File: return io::read_algebra(src.path, prime);
    case AlgebraSource::Kind::Conca:
      return conca_presentation(src.e, src.r, random_conca_coeffs(src.e, src.r, prime, rng), prime);
    case AlgebraSource::Kind::Generic: {
      if (src.e < 2) throw ValidationError("generic algebra needs e >= 2");
      const int nq = src.e * (src.e + 1) / 2 - (src.e - 1);
      for (int attempt = 0; attempt < 100; ++attempt)
        if (auto A = generic_short_algebra(src.e, nq, prime, rng)) return *A;
      throw ValidationError("generic algebra: every sample was degenerate");
    }
  }
  throw std::logic_error("make_algebra: unknown source");
}

// ---------------------------------------------------------------- density sweep

void SweepConfig::validate(const GradedAlgebra& A) const {
  if (trials < 1) throw ValidationError("sweep: trials must be at least 1");
  if (p < 1 || q < 0) throw ValidationError("sweep: need p >= 1 and q >= 0");
  if (m < 0) throw ValidationError("sweep: m must be nonnegative");
  if (q > A.e * p) throw ValidationError("sweep: q must not exceed e p");
  if (cross_check < 1) throw ValidationError("sweep: cross-check interval must be positive");
  if (A.prime != prime) throw ValidationError("sweep: algebra prime differs from the configured prime");
}

SweepTally& SweepTally::operator+=(const SweepTally& o) {
  trials += o.trials;
  if (pass.size() < o.pass.size()) pass.resize(o.pass.size(), 0);
  for (std::size_t k = 0; k < o.pass.size(); ++k) pass[k] += o.pass[k];
  cross_checked += o.cross_checked;
  disagreements += o.disagreements;
  return *this;
}

namespace {

// Largest k <= m with M k-step linear, or -1.
int linear_depth_direct(const GradedAlgebra& A, const GradedModule& M, int m) {
  ResolutionOptions o;
  o.stop_when_nonlinear = true;
  o.last_differential = false;
  ResolutionSlice S = minimal_resolution(A, M, m, o);
  int k = -1;
  while (k < S.m && S.linear_through(k + 1)) ++k;
  if (k == m && !S.complete) throw WindowError("sweep: linearity cannot be certified on the window", S.J);
  return k;
}

int linear_depth_delta(const GradedAlgebra& A, const ResolutionSlice& kres, const ShortTable& T, int m) {
  const Field f = A.field();
  int k = -1;
  for (int i = 1; i <= m + 1; ++i) {
    Matrix d = delta_matrix(A, kres, T, i);
    if (rank(f, d) != d.rows) break;
    k = i - 1;
  }
  return k;
}

bool fast_path_available(const GradedAlgebra& A, int m) {
  if (!A.is_short()) return false;
  try {
    return koszul_to_step(A, m + 1).koszul;
  } catch (const WindowError&) {
    return false;
  }
}

std::string fraction(std::uint64_t a, std::uint64_t b) {
  // Six decimals, rounded half up, from integers only.
  const std::uint64_t scaled = (a * 2000000 + b) / (2 * b);
  std::ostringstream os;
  os << scaled / 1000000 << '.' << std::setw(6) << std::setfill('0') << scaled % 1000000;
  return os.str();
}

}  // namespace

SweepTally sweep_range(const GradedAlgebra& A, const SweepConfig& cfg, bool fast_path, std::uint64_t begin,
                       std::uint64_t end) {
  SweepTally t;
  t.pass.assign(std::size_t(cfg.m) + 1, 0);
  std::shared_ptr<const ResolutionSlice> kres;
  if (fast_path) kres = default_k_cache().get(A, cfg.m + 1);
  for (std::uint64_t i = begin; i < end; ++i) {
    std::mt19937_64 rng(trial_seed(cfg.seed, i));
    ShortTable T = random_table(A.e, cfg.p, cfg.q, A.prime, rng);
    int depth;
    if (fast_path) {
      depth = linear_depth_delta(A, *kres, T, cfg.m);
      if (i % cfg.cross_check == 0) {
        ++t.cross_checked;
        if (linear_depth_direct(A, table_to_module(A, T), cfg.m) != depth) ++t.disagreements;
      }
    } else {
      depth = linear_depth_direct(A, table_to_module(A, T), cfg.m);
    }
    ++t.trials;
    for (int k = 0; k <= depth; ++k) ++t.pass[std::size_t(k)];
  }
  return t;
}

SweepResult density_sweep(const SweepConfig& cfg, int shards, int jobs) {
  return density_sweep(make_algebra(cfg.source, cfg.prime), cfg, shards, jobs);
}

SweepResult density_sweep(const GradedAlgebra& A, const SweepConfig& cfg, int shards, int jobs) {
  cfg.validate(A);
  if (shards < 1 || jobs < 1) throw ValidationError("sweep: shards and jobs must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  SweepResult res;
  res.cfg = cfg;
  res.fast_path = fast_path_available(A, cfg.m);
  if (res.fast_path) (void)default_k_cache().get(A, cfg.m + 1);
  const std::size_t nshards = std::size_t(shards);
  std::vector<SweepTally> parts(nshards);
  auto run = [&](std::size_t s) {
    const std::uint64_t b = cfg.trials * s / std::size_t(shards), e = cfg.trials * (s + 1) / std::size_t(shards);
    parts[s] = sweep_range(A, cfg, res.fast_path, b, e);
  };
  std::vector<std::exception_ptr> errors(nshards);
  for (std::size_t start = 0; start < parts.size(); start += std::size_t(jobs)) {
    std::vector<std::thread> pool;
    const std::size_t stop = std::min(parts.size(), start + std::size_t(jobs));
    for (std::size_t s = start; s < stop; ++s)
      pool.emplace_back([&, s] {
        try {
          run(s);
        } catch (...) {
          errors[s] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  res.tally.pass.assign(std::size_t(cfg.m) + 1, 0);
  for (const auto& p : parts) res.tally += p;
  res.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

std::string SweepResult::csv() const {
  std::ostringstream os;
  os << "algebra,prime,seed,p,q,step,trials,linear,fraction,route,cross_checked,disagreements\n";
  for (int k = 0; k <= cfg.m; ++k)
    os << cfg.source.describe() << ',' << cfg.prime << ',' << cfg.seed << ',' << cfg.p << ',' << cfg.q << ',' << k
       << ',' << tally.trials << ',' << tally.pass[std::size_t(k)] << ',' << fraction(tally.pass[std::size_t(k)], tally.trials)
       << ',' << (fast_path ? "delta" : "direct") << ',' << tally.cross_checked << ',' << tally.disagreements << '\n';
  return os.str();
}

// ---------------------------------------------------------------- witnesses

namespace {

// Invertible P whose last column is x, so that x becomes the last basis element.
Matrix basis_with_last(const Vec& x) {
  const std::size_t e = x.size();
  std::size_t k = 0;
  while (x[k] == 0) ++k;
  Matrix P(e, e);
  std::size_t c = 0;
  for (std::size_t i = 0; i < e; ++i)
    if (i != k) P(i, c++) = 1;
  for (std::size_t i = 0; i < e; ++i) P(i, e - 1) = x[i];
  return P;
}

// T repeated p times along the block diagonal.
ShortTable direct_power(const ShortTable& T, int p) {
  ShortTable S{T.prime, T.e, T.p * p, T.q * p, Matrix(std::size_t(T.e * T.p * p), std::size_t(T.q * p))};
  for (int b = 0; b < p; ++b)
    for (int l = 0; l < T.e; ++l)
      for (int n = 0; n < T.p; ++n)
        for (int h = 0; h < T.q; ++h)
          S.C(std::size_t(S.row(l, b * T.p + n)), std::size_t(b * T.q + h)) = T.C(std::size_t(T.row(l, n)), std::size_t(h));
  return S;
}

// Betti totals to step m, with linearity and completeness.
struct LinearRun {
  bool linear = false;
  std::vector<std::size_t> betti;
  TruncSeries P{1};
};

LinearRun run_linear(const GradedAlgebra& A, const GradedModule& M, int m) {
  ResolutionOptions o;
  o.stop_when_nonlinear = true;
  o.last_differential = false;
  ResolutionSlice S = minimal_resolution(A, M, m, o);
  LinearRun r;
  r.linear = S.m == m && S.linear_through(m) && S.complete;
  for (int i = 0; i <= S.m; ++i) r.betti.push_back(S.steps[std::size_t(i)].total());
  r.P = S.poincare();
  return r;
}

std::string join(const std::vector<std::size_t>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  return os.str();
}

std::string vec_string(const Vec& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

}  // namespace

bool WitnessReport::all_verified() const {
  return std::all_of(entries.begin(), entries.end(), [](const WitnessEntry& w) { return !w.applicable || w.verified; });
}

std::string WitnessReport::text() const {
  std::ostringstream os;
  os << "witness suite: e=" << e << " r=" << r << " m=" << m << " conca generator "
     << (conca_generator ? vec_string(*conca_generator) : std::string("none found")) << '\n';
  for (const auto& w : entries) {
    os << "  " << w.kind << " p=" << w.p << " q=" << w.q << ": ";
    if (!w.applicable)
      os << "not applicable";
    else
      os << (w.verified ? "verified" : "FAILED");
    if (!w.betti.empty()) os << " betti=[" << join(w.betti) << "]";
    if (!w.detail.empty()) os << " (" << w.detail << ")";
    os << '\n';
  }
  for (const auto& [pq, b] : bounds) {
    os << "  bound p=" << pq.first << " q=" << pq.second << ": admissible=" << b.admissible << " extremal=" << b.extremal;
    if (b.roots.rational()) os << " u=" << *b.roots.u() << " v=" << *b.roots.v();
    os << '\n';
  }
  return os.str();
}

WitnessReport witness_suite(const GradedAlgebra& A, const WitnessOptions& opt) {
  if (!A.is_short()) throw PreconditionError("witness_suite: algebra is not short");
  WitnessReport rep;
  rep.e = A.e;
  rep.r = int(A.dim(2));
  rep.m = opt.m;
  const int e = A.e, r = rep.r;
  auto sizes = opt.sizes;
  if (sizes.empty())
    for (int p = 1; p <= 2; ++p) sizes.emplace_back(p, (e - 1) * p);

  Vec last(std::size_t(e), 0);
  last[std::size_t(e - 1)] = 1;
  if (conca_check(A, last)) {
    rep.conca_generator = last;
  } else {
    const double points = std::pow(double(A.prime), double(e));
    auto res = conca_search(A, points <= 1e7 ? SearchStrategy::Exhaustive : SearchStrategy::Randomized);
    if (res.x) rep.conca_generator = res.x;
  }
  // B has the Conca generator as its last variable.
  GradedAlgebra B = rep.conca_generator ? change_basis(A, basis_with_last(*rep.conca_generator)) : A;
  const bool gor = is_short_gorenstein(A);

  for (auto [p, q] : sizes) {
    rep.bounds.emplace_back(std::make_pair(p, q), uv_bound_check(e, r, p, q));
    WitnessEntry cw{"conca", p, q};
    cw.applicable = rep.conca_generator && q <= (e - 1) * p;
    if (cw.applicable) {
      GradedModule M = table_to_module(B, conca_witness(e, p, q, A.prime));
      const bool ann = annihilated_by(M, last);
      LinearRun run = run_linear(B, M, opt.m);
      cw.verified = ann && run.linear;
      cw.betti = run.betti;
      if (!ann) cw.detail = "not annihilated by the generator";
    }
    rep.entries.push_back(cw);

    WitnessEntry ls{"largest-selector", p, q};
    ls.applicable = rep.conca_generator && q <= (e - r) * p;
    if (ls.applicable) {
      ShortTable T = largest_selector_witness(B, e, p, q);
      const bool sel = selector_det_nonzero(T, largest_selector(e, p, q));
      LinearRun run = run_linear(B, table_to_module(B, T), opt.m);
      ls.verified = sel && run.linear;
      ls.betti = run.betti;
      if (!sel) ls.detail = "selector minor vanishes";
    }
    rep.entries.push_back(ls);

    WitnessEntry gw{"gorenstein", p, q};
    gw.applicable = gor && rep.conca_generator && q <= (e - 1) * p;
    if (gw.applicable) {
      gw.verified = cw.verified;
      gw.detail = "x^2 = 0 generator gives the conca witness";
    }
    rep.entries.push_back(gw);

    WitnessEntry qp{"quotient-power", p, (e - 1) * p};
    qp.applicable = rep.conca_generator && q == (e - 1) * p;
    if (qp.applicable) {
      ShortTable T1 = module_to_table(cyclic_quotient(B, {last}));
      LinearRun run = run_linear(B, table_to_module(B, direct_power(T1, p)), opt.m);
      TruncSeries target = extremal_poincare(e, r, p, 0, opt.m + 1);
      bool match = run.betti.size() == std::size_t(opt.m) + 1;
      for (int n = 0; match && n <= opt.m; ++n) match = run.P.coeff(n) == target.coeff(n);
      qp.verified = run.linear && match;
      qp.betti = run.betti;
      if (!match) qp.detail = "Poincare series differs from p/(1 - u s t)";
    }
    rep.entries.push_back(qp);
  }

  if (opt.period2) {
    WitnessEntry pw{"period-2", 1, e - 1};
    pw.applicable = A.dim(2) + 1 == std::size_t(e);
    if (pw.applicable) {
      std::vector<Vec> cands;
      if (rep.conca_generator) cands.push_back(*rep.conca_generator);
      for (int l = 0; l < e; ++l) {
        Vec u(std::size_t(e), 0);
        u[std::size_t(l)] = 1;
        cands.push_back(u);
      }
      pw.detail = "no cyclic witness among the candidates";
      try {
        for (const auto& a : cands) {
          Period2Report pr = period2_cyclic_check(A, a, opt.m);
          if (!pr.witnessed) continue;
          pw.verified = pr.betti_constant;
          pw.betti = pr.betti;
          pw.detail = "a=" + vec_string(a) + " b=" + vec_string(*pr.b);
          break;
        }
      } catch (const PreconditionError& err) {
        pw.applicable = false;
        pw.detail = err.what();
      }
    }
    rep.entries.push_back(pw);
  }
  return rep;
}

// ---------------------------------------------------------------- introduction experiment

std::string IntroReport::text() const {
  std::ostringstream os;
  os << "intro experiment: e=" << e << " p=" << p << " m=" << m << " seed=" << seed << " resamples=" << resamples << '\n';
  os << "  algebra dims [" << join(algebra_dims) << "] hilbert 1+" << e << "s+" << e - 1 << "s^2: " << (hilbert_ok ? "yes" : "no")
     << '\n';
  os << "  beta_ii = [" << join(diagonal) << "]\n";
  os << "  constant (beta_ii = p): " << (constant ? "yes" : "no") << '\n';
  os << "  linear (beta_i,i+1 = 0): " << (linear ? "yes" : "no") << '\n';
  if (constant) os << "  series p/(1 - st): " << (series_ok ? "matches" : "MISMATCH") << '\n';
  if (!detail.empty()) os << "  " << detail << '\n';
  return os.str();
}

IntroReport intro_experiment(int e, int p, std::uint64_t seed, int m, std::uint32_t prime, int retries) {
  if (e < 2) throw PreconditionError("intro_experiment: needs e >= 2");
  if (p < 1 || m < 0) throw std::invalid_argument("intro_experiment: need p >= 1 and m >= 0");
  IntroReport rep;
  rep.e = e;
  rep.p = p;
  rep.m = m;
  rep.seed = seed;
  std::mt19937_64 rng(splitmix64(seed));
  const int nq = e * (e + 1) / 2 - (e - 1);
  for (int attempt = 0; attempt <= retries; ++attempt, ++rep.resamples) {
    auto A = generic_short_algebra(e, nq, prime, rng);
    if (!A) continue;
    PresentationMatrix B{e, p, Matrix(std::size_t(e * p), std::size_t(p))};
    for (auto& v : B.B.a) v = Scalar(rng() % prime);
    ShortTable T;
    try {
      T = presentation_to_table(*A, B, true);
    } catch (const std::exception&) {
      continue;
    }
    if (T.q != (e - 1) * p) continue;
    rep.algebra_dims = A->dims;
    rep.hilbert_ok = A->dims == std::vector<std::size_t>{1, std::size_t(e), std::size_t(e - 1)};
    GradedModule M = table_to_module(*A, T);
    ResolutionOptions o;
    o.last_differential = false;
    ResolutionSlice S = minimal_resolution(*A, M, m, o);
    rep.constant = true;
    rep.linear = S.linear_through(m);
    for (int i = 0; i <= m; ++i) {
      rep.diagonal.push_back(S.betti(i, i));
      if (rep.diagonal.back() != std::size_t(p)) rep.constant = false;
    }
    if (rep.constant && rep.linear) {
      TheoremSeries ts = per_theorem_series(e, p, 0, TheoremVariant::I, m + 1);
      TruncSeries P = S.poincare();
      rep.series_ok = ts.P.has_value();
      for (int n = 0; rep.series_ok && n <= m; ++n) rep.series_ok = P.coeff(n) == ts.P->coeff(n);
      // Hilbert series target of the theorem.
      PowerSeries HM = hilbert(M);
      for (int j = 0; rep.series_ok && j <= 2; ++j) rep.series_ok = HM.coeff(j) == ts.H_M.coeff(j);
    }
    return rep;
  }
  rep.detail = "every sample was degenerate";
  return rep;
}

// ---------------------------------------------------------------- functoriality

std::string FunctorialityReport::text() const {
  std::ostringstream os;
  os << "functoriality probe: trials=" << trials << " koszul=" << (koszul ? "yes" : "no") << " sub_checked=" << sub_checked
     << " quotient_checked=" << quotient_checked << " counterexamples=" << counterexamples << '\n';
  return os.str();
}

FunctorialityReport functoriality_probe(const GradedAlgebra& A, int p, int q, int pp, int qq, std::uint64_t trials,
                                       std::uint64_t seed, int m) {
  if (!(1 <= pp && pp <= p && 0 <= q && q <= qq && qq <= A.e * p))
    throw std::invalid_argument("functoriality_probe: need 1 <= p' <= p and q <= q' <= e p");
  FunctorialityReport rep;
  rep.trials = trials;
  rep.koszul = koszul_to_step(A, m + 1).koszul;
  if (!rep.koszul) return rep;
  for (std::uint64_t i = 0; i < trials; ++i) {
    std::mt19937_64 rng(trial_seed(seed, i));
    ShortTable Tq = random_table(A.e, p, qq, A.prime, rng);
    ShortTable T = pi_star(Tq, q);
    const bool lin_T = is_m_step_linear(A, table_to_module(A, T), m);
    if (is_m_step_linear(A, table_to_module(A, Tq), m)) {
      ++rep.quotient_checked;
      if (!lin_T) ++rep.counterexamples;
    }
    if (is_m_step_linear(A, table_to_module(A, iota_star(T, pp)), m)) {
      ++rep.sub_checked;
      if (!lin_T) ++rep.counterexamples;
    }
  }
  return rep;
}

// ---------------------------------------------------------------- the four-variable probe

GradedAlgebra remark_probe_algebra(Scalar a, std::uint32_t prime) {
  const Field f(prime);
  auto idx = [](int x, int y) {
    auto mons = quadratic_monomials(4);
    return std::size_t(std::find(mons.begin(), mons.end(), std::make_pair(x, y)) - mons.begin());
  };
  QuadricPresentation P{4, {}};
  auto add = [&](std::vector<std::pair<std::pair<int, int>, Scalar>> terms) {
    Vec v(10, 0);
    for (auto [mn, c] : terms) v[idx(mn.first, mn.second)] = f.from_int(c);
    P.quadrics.push_back(v);
  };
  add({{{0, 0}, 1}});
  add({{{0, 2}, a}, {{1, 2}, 1}});
  add({{{0, 3}, 1}, {{1, 3}, 1}});
  add({{{1, 1}, 1}});
  add({{{2, 2}, 1}});
  add({{{2, 3}, 1}});
  add({{{3, 3}, 1}});
  return from_quadrics(P, 3, prime);
}

std::string RemarkProbeReport::text() const {
  std::ostringstream os;
  os << "four-variable probe: a=" << a << " P=" << prime << '\n';
  os << "  conca search: ";
  switch (search.status) {
    case SearchStatus::Found: os << "found " << vec_string(*search.x); break;
    case SearchStatus::ProvenAbsent: os << "proven absent"; break;
    case SearchStatus::BudgetExhausted: os << "budget exhausted"; break;
  }
  os << " after " << search.tried << " points; x_4 is a Conca generator: " << (x4_is_generator ? "yes" : "no") << '\n';
  os << "  L_{1,3} cyclic witness: " << (period2.witnessed ? "witnessed" : "not witnessed");
  if (period2.witnessed) os << ", constant Betti numbers to step " << m << ": " << (period2.betti_constant ? "yes" : "no");
  if (!period2.detail.empty()) os << " (" << period2.detail << ")";
  os << '\n';
  os << "  L_{2,6} [open problem probe]: " << linear_26 << " of " << trials << " sampled tables with p=2, q=6 are " << m
     << "-step linear; whether the locus has non-empty interior is open and this tabulation does not decide it\n";
  return os.str();
}

RemarkProbeReport remark_probe(Scalar a, std::uint32_t prime, int m, std::uint64_t trials, std::uint64_t seed) {
  RemarkProbeReport rep;
  rep.prime = prime;
  rep.a = a;
  rep.m = m;
  rep.trials = trials;
  GradedAlgebra A = remark_probe_algebra(a, prime);
  const double points = std::pow(double(prime), 4.0);
  rep.search = conca_search(A, points <= 1e7 ? SearchStrategy::Exhaustive : SearchStrategy::Randomized, 0, seed);
  Vec x4{0, 0, 0, 1};
  rep.x4_is_generator = conca_check(A, x4);
  const Vec gen = rep.x4_is_generator ? x4 : rep.search.x.value_or(x4);
  rep.period2 = period2_cyclic_check(A, gen, m);
  auto kres = default_k_cache().get(A, m + 1);
  for (std::uint64_t i = 0; i < trials; ++i) {
    std::mt19937_64 rng(trial_seed(seed, i));
    ShortTable T = random_table(4, 2, 6, prime, rng);
    if (delta_linearity_test(A, *kres, T, m)) ++rep.linear_26;
  }
  return rep;
}

}  // namespace kz
