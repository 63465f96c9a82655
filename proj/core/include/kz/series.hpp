#pragma once

#include <climits>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kz {

struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Laurent polynomial in s with integer coefficients: sum c[k] s^(lo+k).
struct LaurentPoly {
  int lo = 0;
  std::vector<std::int64_t> c;

  LaurentPoly() = default;
  LaurentPoly(int low, std::vector<std::int64_t> coeffs) : lo(low), c(std::move(coeffs)) { normalize(); }
  static LaurentPoly monomial(std::int64_t coeff, int exp) { return LaurentPoly(exp, {coeff}); }
  static LaurentPoly constant(std::int64_t v) { return monomial(v, 0); }

  [[nodiscard]] std::int64_t coeff(int exp) const {
    return exp < lo || exp >= hi() ? 0 : c[std::size_t(exp - lo)];
  }
  /// One past the largest stored exponent.
  [[nodiscard]] int hi() const { return lo + int(c.size()); }
  [[nodiscard]] bool is_zero() const { return c.empty(); }
  void add_term(std::int64_t coeff, int exp);
  void normalize();
  [[nodiscard]] std::int64_t eval_at_one() const;
  [[nodiscard]] LaurentPoly shifted(int k) const { return is_zero() ? *this : LaurentPoly(lo + k, c); }

  bool operator==(const LaurentPoly& o) const { return lo == o.lo && c == o.c; }
  bool operator!=(const LaurentPoly& o) const { return !(*this == o); }
};

LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly operator-(const LaurentPoly& a);
LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly operator*(std::int64_t k, const LaurentPoly& a);

/// Univariate series sum c_j x^j, known exactly for exponents below prec.
/// Used for Hilbert series in s and for singly graded Poincare series in t.
struct PowerSeries {
  static constexpr int kExact = INT_MAX;
  LaurentPoly poly;
  int prec = kExact;

  PowerSeries() = default;
  PowerSeries(LaurentPoly p, int precision = kExact);
  [[nodiscard]] std::int64_t coeff(int j) const;
  [[nodiscard]] bool exact() const { return prec == kExact; }
  bool operator==(const PowerSeries& o) const { return prec == o.prec && poly == o.poly; }
};

PowerSeries operator*(const PowerSeries& a, const PowerSeries& b);
PowerSeries operator+(const PowerSeries& a, const PowerSeries& b);
PowerSeries operator-(const PowerSeries& a, const PowerSeries& b);
/// f(x) -> f(-x).
PowerSeries negate_variable(const PowerSeries& a);
/// Inverse up to x^N (constant term must be +-1, no negative exponents).
PowerSeries inverse(const PowerSeries& a, int N);

/// Bivariate series sum_n a_n(s) t^n, Laurent in s, truncated in t: coefficients are known for n < prec.
class TruncSeries {
 public:
  static constexpr int kExact = INT_MAX;

  explicit TruncSeries(int precision = kExact) : prec_(precision) {}
  static TruncSeries one(int precision = kExact);

  [[nodiscard]] int prec() const { return prec_; }
  [[nodiscard]] bool exact() const { return prec_ == kExact; }
  /// Number of stored t-coefficients (all higher ones are zero or unknown).
  [[nodiscard]] int length() const { return int(t_.size()); }
  [[nodiscard]] const LaurentPoly& coeff(int n) const;
  [[nodiscard]] std::int64_t coeff(int n, int sexp) const { return coeff(n).coeff(sexp); }
  void set(int n, LaurentPoly p);
  void add_term(std::int64_t c, int n, int sexp);
  [[nodiscard]] TruncSeries truncated(int N) const;

  bool operator==(const TruncSeries& o) const;
  bool operator!=(const TruncSeries& o) const { return !(*this == o); }

 private:
  void trim();
  int prec_;
  std::vector<LaurentPoly> t_;
};

TruncSeries operator+(const TruncSeries& a, const TruncSeries& b);
TruncSeries operator-(const TruncSeries& a, const TruncSeries& b);
TruncSeries operator*(const TruncSeries& a, const TruncSeries& b);
TruncSeries operator*(std::int64_t k, const TruncSeries& a);
/// Multiply by s^k t^n.
TruncSeries shift(const TruncSeries& a, int sexp, int texp);

/// Inverse up to t^N. The t^0 coefficient must be a unit monomial +-s^k.
TruncSeries inverse(const TruncSeries& a, int N);
/// f(s,t) -> f(-st, t). Requires nonnegative s-exponents on the known part when prec is finite.
TruncSeries substitute_neg_st(const TruncSeries& a);
/// H(s) -> H(-st) as a bivariate series; t-precision equals the s-precision of H.
TruncSeries substitute_neg_st(const PowerSeries& h);
/// f(s,t) -> f(1,t).
PowerSeries eval_s1(const TruncSeries& a);
/// P(s,t) from a Betti table: sum beta_{ij} s^j t^i. prec = m+1.
TruncSeries poincare_from_betti(const std::vector<std::vector<std::int64_t>>& betti_by_i_then_j, int m);

/// P(s,t) H_R(-st) == (-t)^{-d} H_M(-st) up to the precision of P.
bool check_linear_identity(const TruncSeries& P, const PowerSeries& H_R, const PowerSeries& H_M, int d);
/// P_k(t) H_R(-t) truncated to the common precision.
PowerSeries koszul_product(const PowerSeries& Pk, const PowerSeries& H_R);
/// P_k(t) H_R(-t) == 1 up to the common precision.
bool check_koszul_identity(const PowerSeries& Pk, const PowerSeries& H_R);
/// P_k(s,t) / (1 - s^{1-d} t P_M(s,t)) truncated at t^N.
TruncSeries gulliksen_rhs(const TruncSeries& Pk, const TruncSeries& PM, int d, int N);

/// Roots of z^2 - e z + r, never materialized as floating values.
struct RootPair {
  std::int64_t e = 0, r = 0;
  [[nodiscard]] std::int64_t disc() const { return e * e - 4 * r; }
  [[nodiscard]] bool real() const { return disc() >= 0; }
  [[nodiscard]] bool rational() const;
  /// Integer roots (u <= v); present only when rational.
  [[nodiscard]] std::optional<std::int64_t> u() const;
  [[nodiscard]] std::optional<std::int64_t> v() const;
};

struct UvBound {
  RootPair roots;
  bool admissible = false;  // q <= v p
  bool extremal = false;    // q == v p
};

UvBound uv_bound_check(std::int64_t e, std::int64_t r, std::int64_t p, std::int64_t q);

/// p s^d / (1 - u s t) truncated at t^N.
TruncSeries extremal_poincare(std::int64_t e, std::int64_t r, std::int64_t p, int d, int N);

enum class TheoremVariant { I, III, IV, V, VI };

struct TheoremSeries {
  TheoremVariant variant;
  std::optional<TruncSeries> P;  // absent for (iv), which constrains only Hilbert series
  PowerSeries H_M;
  PowerSeries H_base;            // H_R for (i),(vi); H_Q for (iii),(iv),(v)
  bool base_is_Q = false;
  /// (vi): shifts of the period-2 sequence 0 -> M(-2) -> R^p(-d-1) -> R^p(-d) -> M -> 0, as (rank, shift) with rank 0 for M.
  std::vector<std::pair<std::int64_t, int>> sequence;
};

TheoremSeries per_theorem_series(std::int64_t e, std::int64_t p, int d, TheoremVariant v, int N, int c = 1);
TheoremVariant parse_variant(const std::string& s);

std::string to_string(const LaurentPoly& p, char var = 's');
std::string to_string(const PowerSeries& p, char var = 's');
std::string to_string(const TruncSeries& a);

}  // namespace kz
