#include "kz/series.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kz {

namespace {

std::int64_t add_ck(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("series coefficient overflow");
  return r;
}

std::int64_t mul_ck(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("series coefficient overflow");
  return r;
}

std::int64_t sign_pow(int k) { return (k % 2 == 0) ? 1 : -1; }

std::int64_t isqrt(std::int64_t n) {
  if (n < 0) return -1;
  auto r = std::int64_t(std::sqrt(double(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

// ---------------------------------------------------------------- LaurentPoly

void LaurentPoly::normalize() {
  std::size_t b = 0;
  while (b < c.size() && c[b] == 0) ++b;
  if (b == c.size()) {
    c.clear();
    lo = 0;
    return;
  }
  std::size_t e = c.size();
  while (c[e - 1] == 0) --e;
  c = std::vector<std::int64_t>(c.begin() + std::ptrdiff_t(b), c.begin() + std::ptrdiff_t(e));
  lo += int(b);
}

void LaurentPoly::add_term(std::int64_t coeff, int exp) {
  if (coeff == 0) return;
  if (c.empty()) {
    lo = exp;
    c = {coeff};
    return;
  }
  if (exp < lo) {
    c.insert(c.begin(), std::size_t(lo - exp), 0);
    lo = exp;
  } else if (exp >= hi()) {
    c.resize(std::size_t(exp - lo + 1), 0);
  }
  auto& slot = c[std::size_t(exp - lo)];
  slot = add_ck(slot, coeff);
  if (slot == 0) normalize();
}

std::int64_t LaurentPoly::eval_at_one() const {
  std::int64_t s = 0;
  for (auto v : c) s = add_ck(s, v);
  return s;
}

LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const int lo = std::min(a.lo, b.lo), hi = std::max(a.hi(), b.hi());
  std::vector<std::int64_t> c(std::size_t(hi - lo));
  for (int k = lo; k < hi; ++k) c[std::size_t(k - lo)] = add_ck(a.coeff(k), b.coeff(k));
  return {lo, std::move(c)};
}

LaurentPoly operator-(const LaurentPoly& a) { return -1 * a; }
LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return a + (-b); }

LaurentPoly operator*(std::int64_t k, const LaurentPoly& a) {
  std::vector<std::int64_t> c(a.c.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = mul_ck(k, a.c[i]);
  return {a.lo, std::move(c)};
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<std::int64_t> c(a.c.size() + b.c.size() - 1, 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j) c[i + j] = add_ck(c[i + j], mul_ck(a.c[i], b.c[j]));
  }
  return {a.lo + b.lo, std::move(c)};
}

// ---------------------------------------------------------------- PowerSeries

PowerSeries::PowerSeries(LaurentPoly p, int precision) : poly(std::move(p)), prec(precision) {
  if (prec != kExact && !poly.is_zero() && poly.hi() > prec) {
    std::vector<std::int64_t> c;
    for (int k = poly.lo; k < prec; ++k) c.push_back(poly.coeff(k));
    poly = LaurentPoly(poly.lo, std::move(c));
  }
}

std::int64_t PowerSeries::coeff(int j) const {
  if (j >= prec) throw PrecisionError("coefficient beyond series precision");
  return poly.coeff(j);
}

PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
  return {a.poly * b.poly, std::min(a.prec, b.prec)};
}
PowerSeries operator+(const PowerSeries& a, const PowerSeries& b) {
  return {a.poly + b.poly, std::min(a.prec, b.prec)};
}
PowerSeries operator-(const PowerSeries& a, const PowerSeries& b) {
  return {a.poly - b.poly, std::min(a.prec, b.prec)};
}

PowerSeries negate_variable(const PowerSeries& a) {
  LaurentPoly r;
  for (int k = a.poly.lo; k < a.poly.hi(); ++k) r.add_term(mul_ck(sign_pow(k), a.poly.coeff(k)), k);
  return {r, a.prec};
}

PowerSeries inverse(const PowerSeries& a, int N) {
  const int prec = std::min(a.prec, N);
  if (a.poly.is_zero() || a.poly.lo != 0 || (a.poly.c[0] != 1 && a.poly.c[0] != -1))
    throw std::domain_error("inverse: constant term is not a unit");
  if (a.poly.lo < 0) throw std::domain_error("inverse: negative exponents");
  const std::int64_t c0 = a.poly.c[0];
  std::vector<std::int64_t> b(std::size_t(std::max(prec, 0)), 0);
  for (int n = 0; n < prec; ++n) {
    std::int64_t s = n == 0 ? 1 : 0;
    for (int i = 1; i <= n; ++i) s = add_ck(s, -mul_ck(a.poly.coeff(i), b[std::size_t(n - i)]));
    b[std::size_t(n)] = mul_ck(s, c0);
  }
  return {LaurentPoly(0, std::move(b)), prec};
}

// ---------------------------------------------------------------- TruncSeries

TruncSeries TruncSeries::one(int precision) {
  TruncSeries r(precision);
  r.set(0, LaurentPoly::constant(1));
  return r;
}

const LaurentPoly& TruncSeries::coeff(int n) const {
  static const LaurentPoly zero;
  if (n >= prec_) throw PrecisionError("coefficient beyond series precision");
  return n < 0 || n >= length() ? zero : t_[std::size_t(n)];
}

void TruncSeries::set(int n, LaurentPoly p) {
  if (n < 0) throw std::invalid_argument("negative t exponent");
  if (n >= prec_) return;
  if (n >= length()) t_.resize(std::size_t(n + 1));
  t_[std::size_t(n)] = std::move(p);
  trim();
}

void TruncSeries::add_term(std::int64_t c, int n, int sexp) {
  if (n < 0) throw std::invalid_argument("negative t exponent");
  if (n >= prec_ || c == 0) return;
  if (n >= length()) t_.resize(std::size_t(n + 1));
  t_[std::size_t(n)].add_term(c, sexp);
  trim();
}

void TruncSeries::trim() {
  while (!t_.empty() && t_.back().is_zero()) t_.pop_back();
}

TruncSeries TruncSeries::truncated(int N) const {
  TruncSeries r(std::min(prec_, N));
  for (int n = 0; n < std::min(length(), r.prec_); ++n) r.set(n, t_[std::size_t(n)]);
  return r;
}

bool TruncSeries::operator==(const TruncSeries& o) const { return prec_ == o.prec_ && t_ == o.t_; }

TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) {
  TruncSeries r(std::min(a.prec(), b.prec()));
  for (int n = 0; n < std::min(std::max(a.length(), b.length()), r.prec()); ++n) r.set(n, a.coeff(n) + b.coeff(n));
  return r;
}

TruncSeries operator*(std::int64_t k, const TruncSeries& a) {
  TruncSeries r(a.prec());
  for (int n = 0; n < a.length(); ++n) r.set(n, k * a.coeff(n));
  return r;
}

TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) { return a + (-1) * b; }

TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
  TruncSeries r(std::min(a.prec(), b.prec()));
  const int top = std::min(a.length() + b.length(), r.prec() == TruncSeries::kExact ? INT_MAX : r.prec());
  for (int n = 0; n < top; ++n) {
    LaurentPoly acc;
    for (int i = std::max(0, n - b.length() + 1); i <= std::min(n, a.length() - 1); ++i)
      acc = acc + a.coeff(i) * b.coeff(n - i);
    r.set(n, acc);
  }
  return r;
}

TruncSeries shift(const TruncSeries& a, int sexp, int texp) {
  if (texp < 0) throw std::invalid_argument("negative t shift");
  const int prec = a.exact() ? TruncSeries::kExact : a.prec() + texp;
  TruncSeries r(prec);
  for (int n = 0; n < a.length(); ++n) r.set(n + texp, a.coeff(n).shifted(sexp));
  return r;
}

TruncSeries inverse(const TruncSeries& a, int N) {
  const int prec = std::min(a.prec(), N);
  const LaurentPoly& a0 = a.coeff(0);
  if (a0.c.size() != 1 || (a0.c[0] != 1 && a0.c[0] != -1)) throw std::domain_error("inverse: t^0 coefficient is not a unit");
  const LaurentPoly b0 = LaurentPoly::monomial(a0.c[0], -a0.lo);
  TruncSeries r(prec);
  std::vector<LaurentPoly> b;
  for (int n = 0; n < prec; ++n) {
    if (n == 0) {
      b.push_back(b0);
    } else {
      LaurentPoly s;
      for (int i = 1; i <= std::min(n, a.length() - 1); ++i) s = s + a.coeff(i) * b[std::size_t(n - i)];
      b.push_back(-(b0 * s));
    }
    r.set(n, b.back());
  }
  return r;
}

TruncSeries substitute_neg_st(const TruncSeries& a) {
  TruncSeries r(a.prec());
  for (int n = 0; n < a.length(); ++n) {
    const LaurentPoly& p = a.coeff(n);
    for (int k = p.lo; k < p.hi(); ++k) {
      if (p.coeff(k) == 0) continue;
      if (k < 0 && (!a.exact() || n + k < 0)) throw PrecisionError("substitute: negative s exponent");
      if (n + k < r.prec()) r.add_term(mul_ck(sign_pow(k), p.coeff(k)), n + k, k);
    }
  }
  return r;
}

TruncSeries substitute_neg_st(const PowerSeries& h) {
  if (!h.poly.is_zero() && h.poly.lo < 0) throw PrecisionError("substitute: negative s exponent");
  TruncSeries r(h.prec);
  for (int k = h.poly.lo; k < h.poly.hi(); ++k) r.add_term(mul_ck(sign_pow(k), h.poly.coeff(k)), k, k);
  return r;
}

PowerSeries eval_s1(const TruncSeries& a) {
  LaurentPoly p;
  for (int n = 0; n < a.length(); ++n) p.add_term(a.coeff(n).eval_at_one(), n);
  return {p, a.prec()};
}

TruncSeries poincare_from_betti(const std::vector<std::vector<std::int64_t>>& betti, int m) {
  TruncSeries r(m + 1);
  for (int i = 0; i <= m && i < int(betti.size()); ++i)
    for (int j = 0; j < int(betti[std::size_t(i)].size()); ++j) r.add_term(betti[std::size_t(i)][std::size_t(j)], i, j);
  return r;
}

// ---------------------------------------------------------------- identities

bool check_linear_identity(const TruncSeries& P, const PowerSeries& H_R, const PowerSeries& H_M, int d) {
  const int N = P.prec();
  const TruncSeries hr = substitute_neg_st(H_R);
  LaurentPoly g = H_M.poly.shifted(-d);
  const int gprec = H_M.exact() ? PowerSeries::kExact : H_M.prec - d;
  const TruncSeries hm = shift(substitute_neg_st(PowerSeries(g, gprec)), d, 0);
  if (hr.prec() < N || hm.prec() < N) throw PrecisionError("linear identity: Hilbert window shorter than Poincare precision");
  const TruncSeries lhs = P * hr;
  if (N == TruncSeries::kExact) return lhs == hm;
  return lhs.truncated(N) == hm.truncated(N);
}

PowerSeries koszul_product(const PowerSeries& Pk, const PowerSeries& H_R) { return Pk * negate_variable(H_R); }

bool check_koszul_identity(const PowerSeries& Pk, const PowerSeries& H_R) {
  const PowerSeries prod = koszul_product(Pk, H_R);
  if (prod.exact()) return prod.poly == LaurentPoly::constant(1);
  return PowerSeries(LaurentPoly::constant(1), prod.prec) == prod;
}

TruncSeries gulliksen_rhs(const TruncSeries& Pk, const TruncSeries& PM, int d, int N) {
  if (Pk.prec() < N || PM.prec() < N - 1) throw PrecisionError("gulliksen: input precision below N");
  const TruncSeries denom = TruncSeries::one() - shift(PM.truncated(N - 1), 1 - d, 1);
  return (Pk.truncated(N) * inverse(denom, N)).truncated(N);
}

// ---------------------------------------------------------------- bounds

bool RootPair::rational() const {
  const std::int64_t D = disc();
  if (D < 0) return false;
  const std::int64_t s = isqrt(D);
  return s * s == D;
}

std::optional<std::int64_t> RootPair::u() const {
  if (!rational()) return std::nullopt;
  return (e - isqrt(disc())) / 2;
}

std::optional<std::int64_t> RootPair::v() const {
  if (!rational()) return std::nullopt;
  return (e + isqrt(disc())) / 2;
}

UvBound uv_bound_check(std::int64_t e, std::int64_t r, std::int64_t p, std::int64_t q) {
  if (e < 1 || r < 0 || p < 0 || q < 0) throw std::invalid_argument("uv_bound_check: parameters out of range");
  UvBound out;
  out.roots = {e, r};
  const __int128 D = out.roots.disc();
  if (D < 0) return out;
  const __int128 lhs = __int128(2) * q - __int128(e) * p;
  const __int128 rhs = __int128(p) * p * D;
  out.admissible = lhs <= 0 || lhs * lhs <= rhs;
  out.extremal = lhs >= 0 && lhs * lhs == rhs;
  return out;
}

TruncSeries extremal_poincare(std::int64_t e, std::int64_t r, std::int64_t p, int d, int N) {
  const RootPair roots{e, r};
  auto u = roots.u();
  if (!u) throw std::domain_error("extremal_poincare: discriminant is not a perfect square");
  TruncSeries out(N);
  std::int64_t c = p;
  for (int i = 0; i < N; ++i) {
    out.add_term(c, i, d + i);
    c = mul_ck(c, *u);
    if (c == 0) break;
  }
  return out;
}

TheoremVariant parse_variant(const std::string& s) {
  if (s == "i") return TheoremVariant::I;
  if (s == "iii") return TheoremVariant::III;
  if (s == "iv") return TheoremVariant::IV;
  if (s == "v") return TheoremVariant::V;
  if (s == "vi") return TheoremVariant::VI;
  throw std::invalid_argument("unknown variant '" + s + "'");
}

TheoremSeries per_theorem_series(std::int64_t e, std::int64_t p, int d, TheoremVariant v, int N, int c) {
  if (e < 1) throw std::invalid_argument("per_theorem_series: e must be positive");
  TheoremSeries out{v, std::nullopt, {}, {}, false, {}};
  out.H_M = PowerSeries(LaurentPoly(d, {p, mul_ck(p, e - 1)}));
  const LaurentPoly lin(0, {1, e - 1});
  auto geometric = [&](int terms) {
    TruncSeries P(N);
    for (int i = 0; i < std::min(terms, N); ++i) P.add_term(p, i, d + i);
    return P;
  };
  auto hq = [&] {
    std::vector<std::int64_t> h(std::size_t(N), e);
    h[0] = 1;
    return PowerSeries(LaurentPoly(0, h), N);
  };
  switch (v) {
    case TheoremVariant::I:
    case TheoremVariant::VI:
      out.P = geometric(N);
      out.H_base = PowerSeries(lin * LaurentPoly(0, {1, 1}));
      if (v == TheoremVariant::VI) out.sequence = {{0, -2}, {p, -d - 1}, {p, -d}, {0, 0}};
      break;
    case TheoremVariant::III:
      if (c < 1) throw std::invalid_argument("per_theorem_series: c must be at least 1");
      out.P = geometric(c + 1);
      out.H_base = hq();
      out.base_is_Q = true;
      break;
    case TheoremVariant::IV:
      out.H_base = hq();
      out.base_is_Q = true;
      break;
    case TheoremVariant::V:
      out.P = geometric(2);
      out.H_base = hq();
      out.base_is_Q = true;
      break;
  }
  return out;
}

// ---------------------------------------------------------------- printing

std::string to_string(const LaurentPoly& p, char var) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = p.lo; k < p.hi(); ++k) {
    std::int64_t c = p.coeff(k);
    if (c == 0) continue;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    const std::int64_t a = c < 0 ? -c : c;
    if (k == 0) {
      os << a;
    } else {
      if (a != 1) os << a;
      os << var;
      if (k != 1) os << '^' << k;
    }
    first = false;
  }
  return os.str();
}

std::string to_string(const PowerSeries& p, char var) {
  std::string s = to_string(p.poly, var);
  if (!p.exact()) s += " + O(" + std::string(1, var) + "^" + std::to_string(p.prec) + ")";
  return s;
}

std::string to_string(const TruncSeries& a) {
  std::ostringstream os;
  bool first = true;
  for (int n = 0; n < a.length(); ++n) {
    if (a.coeff(n).is_zero()) continue;
    if (!first) os << " + ";
    os << '(' << to_string(a.coeff(n)) << ')';
    if (n > 0) os << "t" << (n > 1 ? "^" + std::to_string(n) : "");
    first = false;
  }
  if (first) os << "0";
  if (!a.exact()) os << " + O(t^" << a.prec() << ")";
  return os.str();
}

}  // namespace kz
