#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "kz/errors.hpp"
#include "kz/resolution.hpp"

using namespace kz;
using namespace kzt;

namespace {

// k[x,y,z]/(x^2 - y^2, x^2 - z^2, xy, xz, yz): short Gorenstein with H = 1 + 3s + s^2.
GradedAlgebra gorenstein3(std::uint32_t prime = Field::kDefaultPrime) {
  const Field f(prime);
  QuadricPresentation p{3, {}};
  auto q = [&](std::vector<std::pair<std::pair<int, int>, Scalar>> terms) {
    Vec v(6, 0);
    for (auto [mn, c] : terms) v[qidx(3, mn.first, mn.second)] = c;
    p.quadrics.push_back(v);
  };
  q({{{0, 0}, 1}, {{1, 1}, f.neg(1)}});
  q({{{0, 0}, 1}, {{2, 2}, f.neg(1)}});
  q({{{0, 1}, 1}});
  q({{{0, 2}, 1}});
  q({{{1, 2}, 1}});
  return from_quadrics(p, 3, prime);
}

// All quadrics killed: k[x_1..x_e] truncated in degree 1.
GradedAlgebra degree_one(int e) { return truncate(squares(e), 1); }

std::vector<std::size_t> totals(const ResolutionSlice& S) {
  std::vector<std::size_t> out;
  for (int i = 0; i <= S.m; ++i) out.push_back(S.steps[std::size_t(i)].total());
  return out;
}

}  // namespace

TEST(Resolution, ResidueFieldOverSquares) {
  auto A = squares(2);
  auto S = resolution_of_k(A, 6);
  EXPECT_TRUE(S.complete);
  for (int i = 0; i <= 6; ++i) {
    EXPECT_EQ(S.betti(i, i), std::size_t(i + 1)) << i;
    EXPECT_EQ(S.betti_total(i), std::size_t(i + 1));
  }
  EXPECT_TRUE(S.linear_through(6));
}

TEST(Resolution, ResidueFieldOverCompleteIntersection) {
  auto A = xy_example();
  auto S = resolution_of_k(A, 3);
  EXPECT_EQ(S.betti(0, 0), 1u);
  EXPECT_EQ(S.betti(1, 1), 2u);
  EXPECT_EQ(S.betti(2, 2), 2u);
  EXPECT_GE(S.betti(2, 3), 1u);
  EXPECT_EQ(S.betti(2, 3), 1u);
  EXPECT_FALSE(S.linear_through(2));
  EXPECT_TRUE(S.linear_through(1));
  // Tensor product of k[x]/(x^2) and k[y]/(y^3) resolutions: t(1+t) ... sums to (1+t)^2/(1-t^2)^2.
  EXPECT_EQ(totals(S), (std::vector<std::size_t>{1, 2, 3, 4}));
}

TEST(Resolution, ResidueFieldOverCubicTruncation) {
  auto A = cubic_truncation();
  auto S = resolution_of_k(A, 4);
  EXPECT_EQ(S.betti(1, 1), 1u);
  EXPECT_EQ(S.betti(2, 3), 1u);
  EXPECT_EQ(S.betti(3, 4), 1u);
  EXPECT_EQ(S.betti(4, 6), 1u);
  EXPECT_EQ(S.betti(2, 2), 0u);
}

TEST(Resolution, FreeModule) {
  auto A = xy_example();
  auto R = regular_module(A);
  auto S = minimal_resolution(A, R, 3);
  EXPECT_EQ(S.betti(0, 0), 1u);
  for (int i = 1; i <= 3; ++i) EXPECT_EQ(S.steps[std::size_t(i)].total(), 0u);
  EXPECT_TRUE(is_m_step_linear(A, R, 3));
}

TEST(Resolution, StructureAndEuler) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 4; ++trial) {
    auto A = random_conca(3, 2, 100 + trial);
    auto T = random_table(3, 2, 2, A.prime, rng);
    auto M = table_to_module(A, T);
    auto S = minimal_resolution(A, M, 3);
    auto rep = verify_slice(A, M, S);
    EXPECT_TRUE(rep.ok()) << rep.detail;
    EXPECT_TRUE(euler_check(A, M, S));
  }
  for (const auto& A : {squares(2), xy_example(), gorenstein3(), cubic_truncation()}) {
    auto k = residue_field(A);
    auto S = resolution_of_k(A, 4);
    auto rep = verify_slice(A, k, S);
    EXPECT_TRUE(rep.ok()) << rep.detail;
    EXPECT_TRUE(euler_check(A, k, S));
  }
}

TEST(Resolution, VerifyDetectsCorruption) {
  auto A = squares(2);
  auto k = residue_field(A);
  auto S = resolution_of_k(A, 3);
  auto bad = S;
  auto& img = bad.steps[2].blocks[0].images;
  img(0, 0) = A.field().add(img(0, 0), 1);
  EXPECT_FALSE(verify_slice(A, k, bad).ok());
  auto extra = S;
  auto& gens = extra.steps[1].blocks[0].images;
  gens = vstack(gens, Matrix::from_rows({gens.row_vec(0)}));
  extra.steps[1].betti[1] += 1;
  EXPECT_FALSE(verify_slice(A, k, extra).ok());
}

TEST(Resolution, CertificatePathsAgreeWithElimination) {
  ResolutionOptions forced;
  forced.certificate_cost = 0;
  std::mt19937_64 rng(11);
  std::vector<std::pair<GradedAlgebra, GradedModule>> cases;
  for (const auto& A : {squares(2), xy_example(), gorenstein3(), random_conca(3, 2, 5), random_conca(4, 3, 2)})
    cases.emplace_back(A, residue_field(A));
  for (int trial = 0; trial < 4; ++trial) {
    auto A = random_conca(3, 2, 200 + trial);
    cases.emplace_back(A, table_to_module(A, random_table(3, 1 + trial % 2, 2, A.prime, rng)));
  }
  for (const auto& [A, M] : cases) {
    const int m = A.e >= 4 ? 4 : 5;
    auto plain = minimal_resolution(A, M, m);
    auto cert = minimal_resolution(A, M, m, forced);
    for (int i = 0; i <= m; ++i) EXPECT_EQ(cert.steps[std::size_t(i)].betti, plain.steps[std::size_t(i)].betti) << i;
    auto rep = verify_slice(A, M, cert, 0);
    EXPECT_TRUE(rep.ok()) << rep.detail;
    EXPECT_TRUE(verify_slice(A, M, plain, 0).ok());
  }
  auto A = random_conca(3, 2, 5);
  auto k = residue_field(A);
  auto S = resolution_of_k(A, 4);
  auto bad = S;
  auto& img = bad.steps[3].blocks[0].images;
  img(0, 0) = A.field().add(img(0, 0), 1);
  EXPECT_FALSE(verify_slice(A, k, bad, 0).ok());
  auto dropped = S;
  auto& last = dropped.steps[3].blocks[0].images;
  last = Matrix::from_rows({last.row_vec(0)});
  dropped.steps[3].betti[3] = 1;
  EXPECT_FALSE(verify_slice(A, k, dropped, 0).ok());
}

TEST(Resolution, EntriesAndDifferentialShape) {
  auto A = squares(2);
  auto S = resolution_of_k(A, 2);
  // d_1 sends the two generators of F_1 to x and y.
  Vec e0 = S.entry(A, 1, 0, 0), e1 = S.entry(A, 1, 1, 0);
  ASSERT_EQ(e0.size(), 2u);
  EXPECT_EQ(rank(A.field(), Matrix::from_rows({e0, e1})), 2u);
  EXPECT_THROW((void)S.entry(A, 3, 0, 0), std::out_of_range);
}

TEST(Resolution, LastStepRankMode) {
  auto A = gorenstein3();
  auto k = residue_field(A);
  auto full = resolution_of_k(A, 4);
  ResolutionOptions o;
  o.last_differential = false;
  auto fast = minimal_resolution(A, k, 4, o);
  EXPECT_EQ(totals(full), totals(fast));
  EXPECT_FALSE(fast.steps[4].materialized);
  EXPECT_TRUE(fast.steps[4].blocks.empty());
  for (int i = 0; i <= 4; ++i) EXPECT_EQ(full.steps[std::size_t(i)].betti, fast.steps[std::size_t(i)].betti);
}

TEST(Resolution, StopWhenNonlinear) {
  auto A = xy_example();
  ResolutionOptions o;
  o.stop_when_nonlinear = true;
  auto S = minimal_resolution(A, residue_field(A), 5, o);
  EXPECT_TRUE(S.stopped_early);
  EXPECT_EQ(S.m, 2);
}

TEST(Resolution, Windows) {
  auto A = q_example(3);
  auto k = residue_field(A);
  EXPECT_EQ(max_safe_window(A, k, 3), 3);
  auto S = minimal_resolution(A, k, 3);
  EXPECT_FALSE(S.complete);
  EXPECT_EQ(S.betti(1, 1), 2u);
  EXPECT_THROW((void)S.betti(1, 4), WindowError);
  EXPECT_THROW((void)S.betti_total(1), WindowError);
  EXPECT_THROW((void)S.betti(4, 4), std::out_of_range);
  EXPECT_THROW((void)minimal_resolution(A, k, 3, 5), WindowError);
  try {
    (void)minimal_resolution(A, k, 3, 9);
  } catch (const WindowError& e) {
    EXPECT_EQ(e.max_safe_degree, 3);
  }
  EXPECT_THROW((void)is_m_step_linear(A, k, 3), WindowError);
  EXPECT_THROW((void)koszul_to_step(A, 3), WindowError);
}

TEST(Resolution, WindowAgreesWithLargerTruncation) {
  // beta_ij on the window depends only on the data in degrees <= j.
  auto small = q_example(4), big = q_example(7);
  auto a = resolution_of_k(small, 3), b = resolution_of_k(big, 3);
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; j <= a.J; ++j) EXPECT_EQ(a.betti(i, j), b.betti(i, j)) << i << "," << j;
}

TEST(Resolution, BettiMonotoneUnderLinearity) {
  for (std::uint64_t s = 0; s < 3; ++s) {
    auto A = random_conca(4, 3, 40 + s);
    auto S = resolution_of_k(A, 4);
    ASSERT_TRUE(S.linear_through(4));
    for (int i = 1; i <= 4; ++i) EXPECT_GE(S.betti_total(i), S.betti_total(i - 1));
  }
}

TEST(Koszul, Examples) {
  EXPECT_TRUE(koszul_to_step(squares(3), 4).koszul);
  EXPECT_TRUE(koszul_to_step(gorenstein3(), 4).koszul);
  EXPECT_TRUE(koszul_to_step(degree_one(3), 4).koszul);
  EXPECT_FALSE(koszul_to_step(cubic_truncation(), 3).koszul);
  EXPECT_FALSE(koszul_to_step(xy_example(), 3).koszul);
}

TEST(Koszul, ProductIdentity) {
  for (const auto& A : {squares(2), squares(3), gorenstein3(), degree_one(2), random_conca(3, 2, 5)}) {
    auto rep = koszul_to_step(A, 5);
    ASSERT_TRUE(rep.koszul);
    EXPECT_EQ(rep.product.coeff(0), 1);
    for (int n = 1; n <= 5; ++n) EXPECT_EQ(rep.product.coeff(n), 0) << n;
  }
  auto bad = koszul_to_step(xy_example(), 4);
  bool nonzero = false;
  for (int n = 1; n <= 4; ++n) nonzero = nonzero || bad.product.coeff(n) != 0;
  EXPECT_TRUE(nonzero);
}

TEST(Koszul, DegreeOneBettiNumbers) {
  // k over k[x_1..x_e]/(x)^2: b_i = e^i.
  auto S = resolution_of_k(degree_one(3), 4);
  std::size_t b = 1;
  for (int i = 0; i <= 4; ++i, b *= 3) EXPECT_EQ(S.betti_total(i), b);
}

TEST(Linearity, IsMStepLinearExamples) {
  auto A = squares(2);
  EXPECT_TRUE(is_m_step_linear(A, residue_field(A), 5));
  auto B = xy_example();
  EXPECT_TRUE(is_m_step_linear(B, residue_field(B), 1));
  EXPECT_FALSE(is_m_step_linear(B, residue_field(B), 2));
  // R/(x) over k[x,y]/(x^2,y^2) resolves by multiplication by x.
  auto M = cyclic_quotient(A, {unit(2, 0)});
  EXPECT_TRUE(is_m_step_linear(A, M, 6));
}

TEST(Linearity, LinearityIdentity) {
  // For an m-step linear M: P_M(t) H_R(-t) = H_M(-t) modulo t^{m+1} when M has indeg 0.
  std::mt19937_64 rng(11);
  int linear_seen = 0;
  for (int trial = 0; trial < 12; ++trial) {
    auto A = random_conca(3, 2, 300 + trial);
    auto T = random_table(3, 2, 1 + trial % 3, A.prime, rng);
    auto M = table_to_module(A, T);
    const int m = 3;
    auto S = minimal_resolution(A, M, m);
    if (!S.linear_through(m)) continue;
    ++linear_seen;
    EXPECT_TRUE(check_linear_identity(S.poincare(), hilbert(A), hilbert(M), 0));
  }
  EXPECT_GT(linear_seen, 0);
}

TEST(Linearity, ThreeRoutesAgree) {
  std::mt19937_64 rng(19);
  int agree_true = 0, agree_false = 0;
  for (int trial = 0; trial < 16; ++trial) {
    auto A = random_conca(3, 2, 500 + trial);
    const int p = 1 + trial % 2, q = 1 + trial % 4;
    auto T = random_table(3, p, q, A.prime, rng);
    auto M = table_to_module(A, T);
    const int m = 2;
    auto kres = resolution_of_k(A, m + 1);
    const bool direct = is_m_step_linear(A, M, m);
    const bool crit = short_linear_criterion(A, M, m);
    const bool delta = delta_linearity_test(A, kres, T, m);
    EXPECT_EQ(direct, crit) << trial;
    EXPECT_EQ(direct, delta) << trial;
    (direct ? agree_true : agree_false)++;
  }
  EXPECT_GT(agree_true, 0);
  EXPECT_GT(agree_false, 0);
}

TEST(Linearity, DeltaZeroTable) {
  auto A = squares(3);
  auto kres = resolution_of_k(A, 3);
  ShortTable T{A.prime, 3, 2, 2, Matrix(6, 2)};
  EXPECT_FALSE(delta_linearity_test(A, kres, T, 1));
  ShortTable T0{A.prime, 3, 2, 0, Matrix(6, 0)};
  EXPECT_TRUE(delta_linearity_test(A, kres, T0, 2));
  auto d = delta_matrix(A, kres, T, 2);
  EXPECT_EQ(d.rows, 2u * kres.betti_total(1));
  EXPECT_EQ(d.cols, 2u * kres.betti_total(2));
}

TEST(Linearity, CriterionPreconditions) {
  auto A = xy_example();
  std::mt19937_64 rng(1);
  auto T = random_table(2, 1, 1, A.prime, rng);
  EXPECT_THROW((void)short_linear_criterion(A, table_to_module(A, T), 1), PreconditionError);
  auto B = squares(2);
  EXPECT_THROW((void)short_linear_criterion(B, shifted(table_to_module(B, T), 1), 1), PreconditionError);
  EXPECT_THROW((void)short_linear_criterion(B, regular_module(B), 1), PreconditionError);
}

TEST(Linearity, LiftShortModule) {
  auto Q = q_example(4);
  Vec y2(Q.dim(2), 0);
  y2[1] = 1;
  auto qr = quotient_by_element(Q, y2);
  ASSERT_TRUE(qr.nzd);
  std::mt19937_64 rng(3);
  auto T = random_table(2, 1, 1, Q.prime, rng);
  EXPECT_EQ(lift_short_module(Q, y2, qr.R, T), T);
  EXPECT_THROW((void)lift_short_module(Q, y2, xy_example(), T), std::invalid_argument);
  auto T3 = random_table(3, 1, 1, Q.prime, rng);
  EXPECT_THROW((void)lift_short_module(Q, y2, qr.R, T3), std::invalid_argument);
}

TEST(Hom, Duals) {
  auto A = squares(2);
  auto H = graded_hom_dual(A, residue_field(A));
  EXPECT_EQ(H.lowdeg, 2);
  EXPECT_EQ(H.dims, (std::vector<std::size_t>{1}));
  auto HR = graded_hom_dual(A, regular_module(A));
  EXPECT_EQ(HR.lowdeg, 0);
  EXPECT_EQ(HR.dims, A.dims);
  EXPECT_TRUE(validate_module(A, HR).ok());
  auto B = xy_example();
  auto HB = graded_hom_dual(B, regular_module(B));
  EXPECT_EQ(HB.dims, B.dims);
  auto Hk = graded_hom_dual(B, residue_field(B));
  EXPECT_EQ(Hk.lowdeg, 3);
  EXPECT_EQ(Hk.dims, (std::vector<std::size_t>{1}));
}

TEST(Hom, SyzygyModule) {
  auto A = gorenstein3();
  auto S = resolution_of_k(A, 3);
  for (int i = 1; i <= 3; ++i) {
    auto O = syzygy_module(A, S, i);
    EXPECT_TRUE(validate_module(A, O).ok());
    EXPECT_EQ(O.lowdeg, i);
    EXPECT_EQ(O.dim(i), S.betti_total(i));
    // Omega^i = ker d_{i-1} by exactness.
    auto dims = free_layout(A, S.steps[std::size_t(i - 1)].gen_degrees(), i + 1).total;
    EXPECT_EQ(O.dim(i + 1), S.kernel_dims[std::size_t(i)].at(i + 1));
    EXPECT_LE(O.dim(i + 1), dims);
  }
}

TEST(Gorenstein, ObstructionModules) {
  auto A = gorenstein3();
  ASSERT_TRUE(is_short_gorenstein(A));
  auto kres = resolution_of_k(A, 4);
  for (int i = 1; i <= 3; ++i) {
    auto N = gorenstein_obstruction_module(A, i);
    EXPECT_TRUE(validate_module(A, N).ok());
    EXPECT_EQ(N.indeg(), 0);
    EXPECT_EQ(N.dim(0), kres.betti_total(i - 1)) << i;
    EXPECT_EQ(N.dim(1), kres.betti_total(i)) << i;
    EXPECT_EQ(N.top(), 1);
    if (i > 1) EXPECT_TRUE(is_m_step_linear(A, N, i - 1)) << i;
    EXPECT_FALSE(is_m_step_linear(A, N, i)) << i;
  }
}

TEST(Gorenstein, Recognition) {
  EXPECT_TRUE(is_short_gorenstein(squares(2)));
  EXPECT_TRUE(is_short_gorenstein(gorenstein3()));
  EXPECT_FALSE(is_short_gorenstein(squares(3)));
  EXPECT_FALSE(is_short_gorenstein(degree_one(2)));
  EXPECT_EQ(gorenstein_stopping_bound(squares(2), 3), 2);
  EXPECT_EQ(gorenstein_stopping_bound(squares(2), 0), 0);
  // b = 1, 3, 8, ... for H = 1 + 3s + s^2.
  EXPECT_EQ(gorenstein_stopping_bound(gorenstein3(), 3), 2);
  EXPECT_EQ(gorenstein_stopping_bound(gorenstein3(), 0), 0);
  EXPECT_EQ(gorenstein_stopping_bound(gorenstein3(), 8), 3);
  EXPECT_THROW((void)gorenstein_stopping_bound(squares(3), 1), PreconditionError);
}

TEST(Period2, Examples) {
  auto A = squares(2);
  auto r = period2_cyclic_check(A, unit(2, 0), 5);
  EXPECT_TRUE(r.witnessed);
  ASSERT_TRUE(r.b.has_value());
  EXPECT_EQ(*r.b, unit(2, 0));
  EXPECT_TRUE(r.betti_constant);
  EXPECT_EQ(r.betti, (std::vector<std::size_t>(6, 1)));
  auto z = period2_cyclic_check(A, Vec{0, 0}, 3);
  EXPECT_FALSE(z.witnessed);
  auto s = period2_cyclic_check(A, Vec{1, 1}, 4);
  EXPECT_TRUE(s.witnessed);
  EXPECT_EQ(*s.b, (Vec{1, A.field().neg(1)}));
  EXPECT_TRUE(s.betti_constant);
  EXPECT_THROW((void)period2_cyclic_check(squares(3), unit(3, 0), 2), PreconditionError);
}

TEST(Period2, RemarkAlgebra) {
  auto A = remark_algebra(2, Field::kDefaultPrime);
  auto r = period2_cyclic_check(A, unit(4, 0), 4);
  EXPECT_TRUE(r.witnessed);
  EXPECT_TRUE(r.betti_constant);
  auto bad = period2_cyclic_check(A, unit(4, 3), 3);
  EXPECT_FALSE(bad.witnessed);
}

TEST(Gorenstein, BettiStrictlyIncrease) {
  for (const auto& A : {squares(2), gorenstein3()}) {
    auto S = resolution_of_k(A, 6);
    for (int i = 1; i <= 6; ++i) EXPECT_GT(S.betti_total(i), S.betti_total(i - 1));
  }
}

TEST(Linearity, SubAndQuotientTransfer) {
  std::mt19937_64 rng(23);
  const int m = 4;
  int sub_checked = 0, quot_checked = 0;
  for (int trial = 0; trial < 10; ++trial) {
    auto A = random_conca(3, 2, 700 + trial);
    ASSERT_TRUE(koszul_to_step(A, m + 1).koszul);
    auto T = random_table(3, 2, 1 + trial % 3, A.prime, rng);
    if (is_m_step_linear(A, table_to_module(A, iota_star(T, 1)), m)) {
      ++sub_checked;
      EXPECT_TRUE(is_m_step_linear(A, table_to_module(A, T), m)) << trial;
    }
    if (T.q > 1 && is_m_step_linear(A, table_to_module(A, T), m)) {
      ++quot_checked;
      EXPECT_TRUE(is_m_step_linear(A, table_to_module(A, pi_star(T, T.q - 1)), m)) << trial;
    }
  }
  EXPECT_GT(sub_checked, 0);
  EXPECT_GT(quot_checked, 0);
}

TEST(Gulliksen, TrivialExtensionOfPeriodTwoModule) {
  auto A = squares(2);
  auto M = cyclic_quotient(A, {unit(2, 0)});
  const int N = 6;
  auto PM = minimal_resolution(A, M, N).poincare();
  auto Pk = resolution_of_k(A, N).poincare();
  auto B = trivial_extension(A, M);
  ASSERT_TRUE(validate(B).ok());
  auto direct = resolution_of_k(B, N).poincare();
  auto rhs = gulliksen_rhs(Pk, PM, 0, N + 1);
  for (int n = 0; n <= N; ++n) EXPECT_EQ(direct.coeff(n), rhs.coeff(n)) << n;
  // Shifting M does not change the trivial extension or the right-hand side.
  auto rhs_shift = gulliksen_rhs(Pk, minimal_resolution(A, shifted(M, 2), N).poincare(), 2, N + 1);
  for (int n = 0; n <= N; ++n) EXPECT_EQ(rhs_shift.coeff(n), rhs.coeff(n)) << n;
}
