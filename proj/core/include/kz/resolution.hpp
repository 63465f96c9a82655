#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "kz/algebra.hpp"
#include "kz/series.hpp"
#include "kz/shortmod.hpp"

namespace kz {

/// Generators of one degree in F_i with their images d(g), one row each, in (F_{i-1})_deg (or M_deg for i = 0).
struct GenBlock {
  int deg = 0;
  Matrix images;
};

struct ResolutionStep {
  /// Ascending degrees. Empty when only Betti numbers were computed for this step.
  std::vector<GenBlock> blocks;
  bool materialized = true;
  std::map<int, std::size_t> betti;

  /// Degree of every generator in basis order.
  [[nodiscard]] std::vector<int> gen_degrees() const;
  [[nodiscard]] std::size_t total() const;
};

/// Coordinates of (F)_j = ⊕_g R_{j - deg g}: one block per generator, in generator order.
struct FreeLayout {
  std::vector<std::size_t> off, len;
  std::size_t total = 0;
};
FreeLayout free_layout(const GradedAlgebra& A, const std::vector<int>& degs, int j);

struct ResolutionSlice {
  std::uint32_t prime = Field::kDefaultPrime;
  int e = 0;
  int m = 0;
  /// Betti numbers are exact for j <= J.
  int J = 0;
  int indeg = 0;
  /// Betti numbers beyond J are known to vanish.
  bool complete = false;
  /// Stopped after the first step with a nonlinear Betti number.
  bool stopped_early = false;
  std::vector<ResolutionStep> steps;
  /// kernel_dims[i][j] = dim ker(d_{i-1})_j, with kernel_dims[0] the module itself.
  std::vector<std::map<int, std::size_t>> kernel_dims;

  /// WindowError for j beyond the exact window, out_of_range for i > m.
  [[nodiscard]] std::size_t betti(int i, int j) const;
  [[nodiscard]] std::size_t betti_total(int i) const;
  /// beta_{ij} = 0 for j != i + indeg, i <= k (within the window).
  [[nodiscard]] bool linear_through(int k) const;
  /// P(s, t) modulo t^{m+1}.
  [[nodiscard]] TruncSeries poincare() const;
  /// Entry of d_i from generator g of F_i to generator gp of F_{i-1}, as an element of R_{deg g - deg gp}.
  [[nodiscard]] Vec entry(const GradedAlgebra& A, int i, std::size_t g, std::size_t gp) const;
  /// dim of ker(d_m)_j on the window.
  [[nodiscard]] std::size_t syzygy_dim(const GradedAlgebra& A, int j) const;
};

struct ResolutionOptions {
  /// Degree bound; -1 picks the largest safe bound.
  int J = -1;
  bool stop_when_nonlinear = false;
  /// Record generators and differential of the last step (otherwise its Betti numbers come from ranks).
  bool last_differential = true;
  /// Work estimate above which ranks are certified from lower bounds before any full elimination.
  double certificate_cost = 2e10;
};

/// Largest J for which Betti numbers are determined by the known data.
int max_safe_window(const GradedAlgebra& A, const GradedModule& M, int m);

ResolutionSlice minimal_resolution(const GradedAlgebra& A, const GradedModule& M, int m, ResolutionOptions opt = {});
ResolutionSlice minimal_resolution(const GradedAlgebra& A, const GradedModule& M, int m, int J);

ResolutionSlice resolution_of_k(const GradedAlgebra& A, int m);

/// Write-once cache of resolutions of k, keyed by the algebra data.
class KResolutionCache {
 public:
  std::shared_ptr<const ResolutionSlice> get(const GradedAlgebra& A, int m);

 private:
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<const ResolutionSlice>> slices_;
};
KResolutionCache& default_k_cache();

bool is_m_step_linear(const GradedAlgebra& A, const GradedModule& M, int m);
bool short_linear_criterion(const GradedAlgebra& A, const GradedModule& M, int m);
/// delta_i : (M_0)^{b_i} -> (M_1)^{b_{i-1}}, blocks sum_l gamma_l B_l.
Matrix delta_matrix(const GradedAlgebra& A, const ResolutionSlice& kres, const ShortTable& T, int i);
bool delta_linearity_test(const GradedAlgebra& A, const ResolutionSlice& kres, const ShortTable& T, int m);

struct KoszulReport {
  bool koszul = false;
  /// P_k(t) H_R(-t) modulo t^{m+1}.
  PowerSeries product;
  std::shared_ptr<const ResolutionSlice> slice;
};
KoszulReport koszul_to_step(const GradedAlgebra& A, int m);

bool euler_check(const GradedAlgebra& A, const GradedModule& M, const ResolutionSlice& S);

struct StructureReport {
  bool minimal = true, dd_zero = true, exact = true;
  std::string detail;
  [[nodiscard]] bool ok() const { return minimal && dd_zero && exact; }
};
/// Recomputes minimality, d∘d = 0 and degreewise exactness from the recorded differentials.
StructureReport verify_slice(const GradedAlgebra& A, const GradedModule& M, const ResolutionSlice& S,
                             double certificate_cost = 2e10);

/// Omega^i = image of d_i inside F_{i-1}, on the slice window (1 <= i <= m, step i materialized).
GradedModule syzygy_module(const GradedAlgebra& A, const ResolutionSlice& S, int i);
GradedModule graded_hom_dual(const GradedAlgebra& A, const GradedModule& N);

bool is_short_gorenstein(const GradedAlgebra& A);
/// Hom_R(Omega^i(k), R)(1 - i).
GradedModule gorenstein_obstruction_module(const GradedAlgebra& A, int i);
/// m = min{i : b_i > q} for e >= 3 and q - 1 for e = 2.
int gorenstein_stopping_bound(const GradedAlgebra& A, int q);

struct Period2Report {
  bool witnessed = false;
  std::optional<Vec> b;
  bool betti_constant = false;
  std::vector<std::size_t> betti;
  std::string detail;
};
Period2Report period2_cyclic_check(const GradedAlgebra& A, const Vec& a, int m);

ShortTable lift_short_module(const GradedAlgebra& Q, const Vec& g, const GradedAlgebra& R, const ShortTable& T);

}  // namespace kz
