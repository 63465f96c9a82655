#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kz/algebra.hpp"
#include "kz/resolution.hpp"
#include "kz/series.hpp"
#include "kz/shortmod.hpp"

namespace kz {

/// SplitMix64 finalizer; trial i of a run with seed s draws from mt19937_64(trial_seed(s, i)).
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

struct AlgebraSource {
  enum class Kind { File, Conca, Generic };
  Kind kind = Kind::Conca;
  std::string path;
  /// Conca: e and r. Generic: e, with binom(e+1,2) - (e-1) random quadrics.
  int e = 0, r = 0;
  std::uint64_t seed = 0;
  [[nodiscard]] std::string describe() const;
};
GradedAlgebra make_algebra(const AlgebraSource& src, std::uint32_t prime);

/// Quotient of k[x_1..x_e] by random quadrics, truncated to be short. Empty when the quadrics are dependent.
std::optional<GradedAlgebra> generic_short_algebra(int e, int nquadrics, std::uint32_t prime, std::mt19937_64& rng);

struct SweepConfig {
  AlgebraSource source;
  int p = 1, q = 1, m = 5;
  std::uint64_t trials = 100;
  std::uint64_t seed = 0;
  std::uint32_t prime = Field::kDefaultPrime;
  /// Every cross_check-th trial (starting with trial 0) is also resolved directly.
  std::uint64_t cross_check = 50;
  std::string out;
  void validate(const GradedAlgebra& A) const;
};

struct SweepTally {
  std::uint64_t trials = 0;
  /// pass[k]: samples that are k-step linear, k = 0..m.
  std::vector<std::uint64_t> pass;
  std::uint64_t cross_checked = 0, disagreements = 0;
  SweepTally& operator+=(const SweepTally& o);
  bool operator==(const SweepTally& o) const = default;
};

struct SweepResult {
  SweepConfig cfg;
  /// delta route when the algebra is short and Koszul to step m+1, otherwise direct resolution only.
  bool fast_path = false;
  SweepTally tally;
  double elapsed_seconds = 0;
  [[nodiscard]] std::string csv() const;
};

/// Trials in [begin, end) only; tallies over any partition add up to the full run.
SweepTally sweep_range(const GradedAlgebra& A, const SweepConfig& cfg, bool fast_path, std::uint64_t begin,
                       std::uint64_t end);
/// Splits the trials into `shards` contiguous ranges evaluated on up to `jobs` threads.
SweepResult density_sweep(const SweepConfig& cfg, int shards = 1, int jobs = 1);
SweepResult density_sweep(const GradedAlgebra& A, const SweepConfig& cfg, int shards = 1, int jobs = 1);

struct WitnessEntry {
  std::string kind;
  int p = 0, q = 0;
  bool applicable = false;
  bool verified = false;
  std::vector<std::size_t> betti;
  std::string detail;
};

struct WitnessReport {
  int e = 0, r = 0, m = 0;
  std::optional<Vec> conca_generator;
  std::vector<WitnessEntry> entries;
  std::vector<std::pair<std::pair<int, int>, UvBound>> bounds;
  [[nodiscard]] bool all_verified() const;
  [[nodiscard]] std::string text() const;
};

struct WitnessOptions {
  int m = 8;
  /// (p, q) pairs to try; empty means (p, (e-1)p) for p = 1, 2.
  std::vector<std::pair<int, int>> sizes;
  bool period2 = true;
};
WitnessReport witness_suite(const GradedAlgebra& A, const WitnessOptions& opt = {});

struct IntroReport {
  int e = 0, p = 0, m = 0;
  std::uint64_t seed = 0;
  int resamples = 0;
  std::vector<std::size_t> algebra_dims;
  bool hilbert_ok = false;
  std::vector<std::size_t> diagonal;  // beta_{ii}, i = 0..m
  bool constant = false;              // beta_{ii} = p for all i <= m
  bool linear = false;                // beta_{i,i+1} = 0 for all i <= m
  bool series_ok = false;             // P_M = p/(1 - st) mod t^{m+1} when constant
  std::string detail;
  [[nodiscard]] std::string text() const;
};
IntroReport intro_experiment(int e, int p, std::uint64_t seed, int m, std::uint32_t prime = Field::kDefaultPrime,
                             int retries = 20);

struct FunctorialityReport {
  std::uint64_t trials = 0;
  bool koszul = false;
  std::uint64_t sub_checked = 0, quotient_checked = 0, counterexamples = 0;
  [[nodiscard]] std::string text() const;
};
/// Samples T' with q' columns; checks pi_star(T', q) and iota_star(pi_star(T', q), p') transfers at step m.
FunctorialityReport functoriality_probe(const GradedAlgebra& A, int p, int q, int pp, int qq, std::uint64_t trials,
                                       std::uint64_t seed, int m);

struct RemarkProbeReport {
  std::uint32_t prime = 0;
  Scalar a = 0;
  ConcaSearchResult search;
  bool x4_is_generator = false;
  Period2Report period2;
  std::uint64_t trials = 0, linear_26 = 0;
  int m = 0;
  [[nodiscard]] std::string text() const;
};
/// Conca generators, the L_{1,3} period-two witness and a tabulation over 2 x 6 tables (an open problem probe).
RemarkProbeReport remark_probe(Scalar a, std::uint32_t prime, int m, std::uint64_t trials, std::uint64_t seed);
GradedAlgebra remark_probe_algebra(Scalar a, std::uint32_t prime);

}  // namespace kz
