#pragma once

#include <vector>

#include "kz/exactla.hpp"

namespace kz {

/// Graded module M_d ⊕ ... ⊕ M_{d+W} over a standard graded algebra with e degree-one generators.
struct GradedModule {
  std::uint32_t prime = Field::kDefaultPrime;
  int e = 0;
  int lowdeg = 0;
  std::vector<std::size_t> dims;
  /// act[l][k] : M_{d+k} -> M_{d+k+1}, column convention.
  std::vector<std::vector<Matrix>> act;
  /// M_j = 0 for j beyond the stored degrees.
  bool exact = true;

  [[nodiscard]] Field field() const { return Field(prime); }
  /// Last stored degree.
  [[nodiscard]] int top() const { return lowdeg + int(dims.size()) - 1; }
  [[nodiscard]] bool known(int j) const { return exact || j <= top(); }
  [[nodiscard]] std::size_t dim(int j) const;
  /// x_l : M_j -> M_{j+1} (zero outside the stored range when exact).
  [[nodiscard]] Matrix action(int l, int j) const;
  [[nodiscard]] std::size_t total_dim() const;
  /// Lowest degree with a nonzero piece (lowdeg if the module is zero).
  [[nodiscard]] int indeg() const;
  [[nodiscard]] bool is_zero() const { return total_dim() == 0; }
};

/// M(-k): same data with every degree raised by k.
GradedModule shifted(const GradedModule& M, int k);

}  // namespace kz
