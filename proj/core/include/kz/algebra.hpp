#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kz/errors.hpp"
#include "kz/exactla.hpp"
#include "kz/module.hpp"
#include "kz/series.hpp"

namespace kz {

using Vec = std::vector<Scalar>;

/// Standard graded algebra R_0 ⊕ ... ⊕ R_D given by multiplication maps x_l : R_j -> R_{j+1}.
struct GradedAlgebra {
  std::uint32_t prime = Field::kDefaultPrime;
  int e = 0;
  int D = 0;
  std::vector<std::size_t> dims;
  /// act[l][j] : R_j -> R_{j+1} for 0 <= j < D, column convention; act[l][0] sends 1 to x_l.
  std::vector<std::vector<Matrix>> act;
  /// R_j = 0 for j > D. Otherwise only degrees <= D are known.
  bool exact = true;

  [[nodiscard]] Field field() const { return Field(prime); }
  [[nodiscard]] bool known(int j) const { return exact || j <= D; }
  /// dim R_j; throws WindowError beyond the known window.
  [[nodiscard]] std::size_t dim(int j) const;
  /// x_l : R_j -> R_{j+1}; a zero map where R_j or R_{j+1} vanishes.
  [[nodiscard]] Matrix action(int l, int j) const;
  /// Top nonzero degree if exact; D otherwise.
  [[nodiscard]] int top() const;
  /// R_j = 0 for j >= 3.
  [[nodiscard]] bool is_short() const;
};

struct Violation {
  std::string kind;  // "shape", "commutativity", "associativity", "standardness", "prime"
  int l = 0, l2 = 0, j = 0;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  [[nodiscard]] bool ok() const { return violations.empty(); }
  [[nodiscard]] std::string summary() const;
};

ValidationReport validate(const GradedAlgebra& A);
ValidationReport validate_module(const GradedAlgebra& A, const GradedModule& M);

PowerSeries hilbert(const GradedAlgebra& A);
PowerSeries hilbert(const GradedModule& M);

struct QuadricPresentation {
  int e = 0;
  /// Coefficients over the monomials x_l x_l' (l <= l') in lex order.
  std::vector<Vec> quadrics;
};

/// Lex-ordered index pairs (l, l') with l <= l' < e, zero-based.
std::vector<std::pair<int, int>> quadratic_monomials(int e);

/// k[x_1..x_e]/(V) in degrees <= D. exact is set when the degree D+1 piece vanishes.
GradedAlgebra from_quadrics(const QuadricPresentation& pres, int D, std::uint32_t prime = Field::kDefaultPrime);
/// Quadric presentation with every monomial x_l x_l' in the given list of lex positions killed.
QuadricPresentation monomial_presentation(int e, const std::vector<std::pair<int, int>>& killed);

GradedAlgebra truncate(const GradedAlgebra& A, int Dp);

/// Matrix of w -> x w from R_j to R_{j+1} for x in R_1.
Matrix linear_form_action(const GradedAlgebra& A, const Vec& x, int j);
/// Right inverse of the joint map [x_1 | ... | x_e] : R_j^e -> R_{j+1}; column b is a lift of basis vector b.
Matrix lift_matrix(const GradedAlgebra& A, int j);
/// Matrix of v -> r v from M_j to M_{j+s}, for r in R_s and a module given by its action maps.
Matrix element_action(const GradedAlgebra& A, const GradedModule& M, const Vec& r, int s, int j);
/// Same for the regular module.
Matrix element_action(const GradedAlgebra& A, const Vec& r, int s, int j);

bool conca_check(const GradedAlgebra& A, const Vec& x);

enum class SearchStrategy { Exhaustive, Randomized };
enum class SearchStatus { Found, ProvenAbsent, BudgetExhausted };

struct ConcaSearchResult {
  SearchStatus status = SearchStatus::BudgetExhausted;
  std::optional<Vec> x;
  std::uint64_t tried = 0;
};

/// budget 0 selects the default (10 P randomized trials; P^e points exhaustive).
ConcaSearchResult conca_search(const GradedAlgebra& A, SearchStrategy strategy, std::uint64_t budget = 0,
                               std::uint64_t seed = 0);
/// Every projective point satisfying conca_check (exhaustive enumeration).
std::vector<Vec> conca_generators(const GradedAlgebra& A);

/// Coefficients a_{l,l';h} for pairs l <= l' <= e-1 (lex, zero-based pairs < e-1) and h < r.
using ConcaCoeffs = std::vector<Vec>;
ConcaCoeffs random_conca_coeffs(int e, int r, std::uint32_t prime, std::mt19937_64& rng);
GradedAlgebra conca_presentation(int e, int r, const ConcaCoeffs& a, std::uint32_t prime = Field::kDefaultPrime);

/// R ⋉ M with R'_j = R_j ⊕ M_{j+d-1}; degree-one basis x_1..x_e then the basis of M_d.
GradedAlgebra trivial_extension(const GradedAlgebra& A, const GradedModule& M);

struct QuotientResult {
  GradedAlgebra R;
  bool nzd = false;
};
QuotientResult quotient_by_element(const GradedAlgebra& Q, const Vec& g);

/// New degree-one basis x'_l = sum_k P(k,l) x_k (P invertible). Higher bases are kept.
GradedAlgebra change_basis(const GradedAlgebra& A, const Matrix& P);

/// Regular module R as a GradedModule.
GradedModule regular_module(const GradedAlgebra& A);
/// Residue field k in degree 0.
GradedModule residue_field(const GradedAlgebra& A);

}  // namespace kz
