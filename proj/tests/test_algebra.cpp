#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "kz/shortmod.hpp"

using namespace kz;
using namespace kzt;

namespace {

std::vector<std::int64_t> coeffs(const PowerSeries& h, int n) {
  std::vector<std::int64_t> out;
  for (int j = 0; j < n; ++j) out.push_back(h.coeff(j));
  return out;
}

using Coeffs = std::vector<std::int64_t>;

}  // namespace

TEST(Validate, CubicTruncation) { EXPECT_TRUE(validate(cubic_truncation()).ok()); }

TEST(Validate, CommutativityViolation) {
  GradedAlgebra A = from_quadrics({2, {}}, 2);
  ASSERT_TRUE(validate(A).ok());
  // x_1 x_2 now lands on x_1^2 instead of x_1 x_2.
  Matrix& m = A.act[0][1];
  m(0, 1) = 1;
  m(1, 1) = 0;
  auto rep = validate(A);
  ASSERT_FALSE(rep.ok());
  EXPECT_EQ(rep.violations[0].kind, "commutativity");
  EXPECT_EQ(rep.violations[0].l, 0);
  EXPECT_EQ(rep.violations[0].l2, 1);
  EXPECT_EQ(rep.violations[0].j, 1);
}

TEST(Validate, ExampleWithCubeRelation) {
  EXPECT_TRUE(validate(xy_example()).ok());
  const GradedAlgebra ref = from_quadrics(monomial_presentation(2, {{0, 0}}), 3);
  EXPECT_EQ(ref.dims, (std::vector<std::size_t>{1, 2, 2, 2}));
}

TEST(Validate, ShapeAndStandardness) {
  GradedAlgebra A = cubic_truncation();
  A.act[0][1] = mat({{0}});
  auto rep = validate(A);
  ASSERT_FALSE(rep.ok());
  EXPECT_EQ(rep.violations[0].kind, "standardness");
  A = cubic_truncation();
  A.dims = {1, 1, 2};
  EXPECT_EQ(validate(A).violations.at(0).kind, "shape");
  A = cubic_truncation();
  A.prime = 32004;
  EXPECT_EQ(validate(A).violations.at(0).kind, "prime");
}

TEST(Hilbert, Examples) {
  EXPECT_EQ(coeffs(hilbert(squares(2)), 4), (Coeffs{1, 2, 1, 0}));
  EXPECT_EQ(coeffs(hilbert(xy_example()), 5), (Coeffs{1, 2, 2, 1, 0}));
  GradedAlgebra A = from_quadrics({3, {}}, 1);
  EXPECT_EQ(coeffs(hilbert(A), 2), (Coeffs{1, 3}));
  EXPECT_EQ(hilbert(A).prec, 2);
  EXPECT_THROW(hilbert(A).coeff(2), PrecisionError);
}

TEST(FromQuadrics, Examples) {
  GradedAlgebra A = from_quadrics(monomial_presentation(2, {{0, 0}, {1, 1}}), 3);
  EXPECT_EQ(A.dims, (std::vector<std::size_t>{1, 2, 1, 0}));
  EXPECT_TRUE(A.exact);
  EXPECT_TRUE(validate(A).ok());
  GradedAlgebra F = from_quadrics({2, {}}, 3);
  EXPECT_EQ(F.dims[2], 3u);
  EXPECT_EQ(F.dims[3], 4u);
  EXPECT_FALSE(F.exact);
  EXPECT_TRUE(validate(F).ok());
}

TEST(FromQuadrics, GenericCodimensionThree) {
  std::mt19937_64 rng(7);
  const int e = 4;
  QuadricPresentation p{e, {}};
  for (int k = 0; k < 7; ++k) {
    Vec v(10);
    for (auto& c : v) c = Scalar(rng() % 32003);
    p.quadrics.push_back(v);
  }
  GradedAlgebra A = from_quadrics(p, 3);
  EXPECT_EQ(A.dims, (std::vector<std::size_t>{1, 4, 3, 0}));
  EXPECT_TRUE(A.exact);
  EXPECT_TRUE(validate(A).ok());
}

TEST(FromQuadrics, DimensionFormulaAndValidity) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int e = 1 + int(rng() % 4);
    const std::size_t n2 = std::size_t(e * (e + 1) / 2);
    const std::size_t k = rng() % (n2 + 1);
    QuadricPresentation p{e, {}};
    // Independent quadrics: random rows of a random invertible change of the monomial basis.
    while (p.quadrics.size() < k) {
      Vec v(n2);
      for (auto& c : v) c = Scalar(rng() % 5);
      p.quadrics.push_back(v);
      if (rank(Field(5), Matrix::from_rows(p.quadrics, n2)) < p.quadrics.size()) p.quadrics.pop_back();
    }
    GradedAlgebra A = from_quadrics(p, 3, 5);
    ASSERT_TRUE(validate(A).ok()) << validate(A).summary();
    if (A.D >= 2) EXPECT_EQ(A.dims[2], n2 - k);
  }
}

TEST(FromQuadrics, RejectsDependentQuadrics) {
  QuadricPresentation p = monomial_presentation(2, {{0, 0}, {0, 0}});
  EXPECT_THROW(from_quadrics(p, 2), ValidationError);
}

TEST(Truncate, Examples) {
  GradedAlgebra A = xy_example();
  EXPECT_EQ(truncate(A, 3).dims, A.dims);
  GradedAlgebra B = truncate(cubic_truncation(), 1);
  EXPECT_EQ(B.dims, (std::vector<std::size_t>{1, 1}));
  EXPECT_TRUE(validate(B).ok());
  EXPECT_EQ(coeffs(hilbert(truncate(A, 2)), 4), (Coeffs{1, 2, 2, 0}));
  EXPECT_TRUE(validate(truncate(A, 2)).ok());
  EXPECT_THROW(truncate(A, 4), std::invalid_argument);
}

TEST(Conca, CheckExamples) {
  for (auto [e, r] : {std::pair{2, 1}, {3, 2}, {4, 3}, {5, 2}}) {
    GradedAlgebra A = random_conca(e, r, 3 + std::uint64_t(e));
    EXPECT_TRUE(validate(A).ok());
    EXPECT_TRUE(conca_check(A, unit(e, e - 1)));
  }
  GradedAlgebra S = squares(2);
  EXPECT_TRUE(conca_check(S, unit(2, 0)));
  EXPECT_FALSE(conca_check(S, Vec{0, 0}));
  EXPECT_FALSE(conca_check(S, Vec{1, 1}));
  EXPECT_THROW(conca_check(S, Vec{1}), std::invalid_argument);
}

TEST(Conca, SearchExamples) {
  GradedAlgebra E1 = from_quadrics(monomial_presentation(1, {{0, 0}}), 2);
  auto r = conca_search(E1, SearchStrategy::Exhaustive);
  ASSERT_EQ(r.status, SearchStatus::Found);
  EXPECT_EQ(*r.x, Vec{1});
  GradedAlgebra S = squares(2, 3);
  auto all = conca_generators(S);
  EXPECT_EQ(all, (std::vector<Vec>{{1, 0}, {0, 1}}));
  auto rr = conca_search(S, SearchStrategy::Randomized, 0, 5);
  ASSERT_EQ(rr.status, SearchStatus::Found);
  EXPECT_TRUE(conca_check(S, *rr.x));
}

TEST(Conca, ProvenAbsentAndBudget) {
  // k[x,y] truncated at degree 2 has no element with square zero.
  GradedAlgebra A = truncate(from_quadrics({2, {}}, 2, 3), 2);
  auto r = conca_search(A, SearchStrategy::Exhaustive);
  EXPECT_EQ(r.status, SearchStatus::ProvenAbsent);
  EXPECT_EQ(r.tried, 4u);
  auto b = conca_search(A, SearchStrategy::Randomized, 50, 1);
  EXPECT_EQ(b.status, SearchStatus::BudgetExhausted);
  EXPECT_EQ(b.tried, 50u);
}

TEST(Conca, RemarkAlgebraGenerators) {
  GradedAlgebra A = remark_algebra(2, 5);
  ASSERT_TRUE(validate(A).ok());
  EXPECT_EQ(A.dims, (std::vector<std::size_t>{1, 4, 3, 0}));
  // x_4 R_1 is spanned by x_1 x_4 alone, so x_4 fails the rank condition while x_1 and x_2 pass.
  EXPECT_FALSE(conca_check(A, unit(4, 3)));
  EXPECT_TRUE(conca_check(A, unit(4, 0)));
  EXPECT_TRUE(conca_check(A, unit(4, 1)));
  auto r = conca_search(A, SearchStrategy::Exhaustive);
  ASSERT_EQ(r.status, SearchStatus::Found);
  EXPECT_EQ(*r.x, unit(4, 0));
}

TEST(Conca, PresentationExamples) {
  GradedAlgebra A = conca_presentation(2, 1, {Vec{0}});
  EXPECT_EQ(coeffs(hilbert(A), 4), (Coeffs{1, 2, 1, 0}));
  EXPECT_TRUE(validate(A).ok());
  GradedAlgebra B = conca_presentation(4, 3, ConcaCoeffs(6, Vec{0, 0, 0}));
  EXPECT_EQ(coeffs(hilbert(B), 4), (Coeffs{1, 4, 3, 0}));
  EXPECT_TRUE(validate(B).ok());
  // x_1 x_2 = 0 and x_2 x_4 is the second basis vector of R_2.
  EXPECT_EQ(B.act[0][1](0, 1), 0u);
  EXPECT_EQ(B.act[1][1](1, 3), 1u);
  EXPECT_THROW(conca_presentation(3, 3, ConcaCoeffs(3, Vec{0, 0, 0})), std::invalid_argument);
  EXPECT_THROW(conca_presentation(3, 0, ConcaCoeffs(3, Vec{})), std::invalid_argument);
}

TEST(Conca, PresentationProperties) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int e = 2 + int(seed % 4);
    const int r = 1 + int(seed % std::uint64_t(e - 1));
    GradedAlgebra A = random_conca(e, r, seed, 101);
    ASSERT_TRUE(validate(A).ok());
    EXPECT_EQ(A.dims, (std::vector<std::size_t>{1, std::size_t(e), std::size_t(r)}));
    EXPECT_TRUE(conca_check(A, unit(e, e - 1)));
  }
}

TEST(TrivialExtension, Examples) {
  GradedAlgebra A = squares(2);
  GradedModule zero = residue_field(A);
  zero.dims = {0};
  EXPECT_EQ(trivial_extension(A, zero).dims, A.dims);
  GradedModule M = cyclic_quotient(A, {unit(2, 0)});
  EXPECT_EQ(M.dims, (std::vector<std::size_t>{1, 1}));
  GradedAlgebra B = trivial_extension(A, M);
  ASSERT_TRUE(validate(B).ok()) << validate(B).summary();
  EXPECT_EQ(coeffs(hilbert(B), 4), (Coeffs{1, 3, 2, 0}));
  // (0,m)(0,m') = 0: the new generator squares to zero and kills M.
  for (int j = 0; j < B.D; ++j) {
    Matrix u = B.action(2, j);
    for (std::size_t c = A.dim(j); c < B.dim(j); ++c)
      for (std::size_t r = 0; r < u.rows; ++r) EXPECT_EQ(u(r, c), 0u);
  }
}

TEST(TrivialExtension, HilbertIdentity) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    GradedAlgebra A = random_conca(3 + trial % 2, 2, std::uint64_t(trial), 101);
    ShortTable T = random_table(A.e, 1 + trial % 3, 1 + trial % 4, 101, rng);
    GradedModule M = shifted(table_to_module(A, T), trial % 3);
    GradedAlgebra B = trivial_extension(A, M);
    ASSERT_TRUE(validate(B).ok()) << validate(B).summary();
    const int d = M.indeg();
    PowerSeries HM = hilbert(M);
    PowerSeries expect = hilbert(A) + PowerSeries{HM.poly.shifted(1 - d), HM.prec};
    for (int j = 0; j <= B.D + 1; ++j) EXPECT_EQ(hilbert(B).coeff(j), expect.coeff(j));
  }
}

TEST(Quotient, ExampleFourFour) {
  GradedAlgebra Q = q_example(4);
  EXPECT_FALSE(Q.exact);
  Vec y2(Q.dim(2), 0);
  // Q_2 basis is the non-pivot part of {x^2, xy, y^2}: xy and y^2.
  y2[1] = 1;
  auto res = quotient_by_element(Q, y2);
  EXPECT_TRUE(res.nzd);
  ASSERT_TRUE(validate(res.R).ok());
  EXPECT_EQ(res.R.dims, (std::vector<std::size_t>{1, 2, 1, 0, 0}));
  PowerSeries lhs = hilbert(res.R);
  PowerSeries rhs = PowerSeries{LaurentPoly(0, {1, 0, -1}), PowerSeries::kExact} * hilbert(Q);
  for (int j = 0; j <= 4; ++j) EXPECT_EQ(lhs.coeff(j), rhs.coeff(j));
}

TEST(Quotient, ZeroAndMonomial) {
  GradedAlgebra Q = q_example(4);
  auto z = quotient_by_element(Q, Vec(Q.dim(2), 0));
  EXPECT_FALSE(z.nzd);
  EXPECT_EQ(z.R.dims, Q.dims);
  GradedAlgebra F = from_quadrics({2, {}}, 4);
  Vec xy(3, 0);
  xy[1] = 1;
  auto r = quotient_by_element(F, xy);
  EXPECT_TRUE(r.nzd);
  EXPECT_EQ(coeffs(hilbert(r.R), 4), (Coeffs{1, 2, 2, 2}));
  EXPECT_TRUE(validate(r.R).ok());
}

TEST(Quotient, WindowIdentityWhenRegular) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    GradedAlgebra Q = trial % 2 ? q_example(5, 7) : from_quadrics({2, {}}, 4, 7);
    Vec g(Q.dim(2));
    for (auto& c : g) c = Scalar(rng() % 7);
    auto res = quotient_by_element(Q, g);
    ASSERT_TRUE(validate(res.R).ok());
    if (!res.nzd) continue;
    PowerSeries rhs = PowerSeries{LaurentPoly(0, {1, 0, -1}), PowerSeries::kExact} * hilbert(Q);
    for (int j = 0; j <= Q.D; ++j) EXPECT_EQ(std::int64_t(res.R.dim(j)), rhs.coeff(j));
  }
}

TEST(ChangeBasis, PreservesValidityAndConca) {
  GradedAlgebra A = remark_algebra(2, 5);
  // Put x_1 last.
  Matrix P(4, 4);
  P(0, 3) = 1;
  P(1, 0) = 1;
  P(2, 1) = 1;
  P(3, 2) = 1;
  GradedAlgebra B = change_basis(A, P);
  ASSERT_TRUE(validate(B).ok());
  EXPECT_TRUE(conca_check(B, unit(4, 3)));
  EXPECT_FALSE(conca_check(B, unit(4, 2)));
}

TEST(ElementAction, MatchesProducts) {
  GradedAlgebra A = xy_example();
  // xy acting R_1 -> R_3 sends y to xy^2 and x to 0.
  Vec xy{1, 0};
  Matrix m = element_action(A, xy, 2, 1);
  EXPECT_EQ(m, mat({{0, 1}}));
  Matrix m0 = element_action(A, Vec{0, 1}, 2, 0);
  EXPECT_EQ(m0, mat({{0}, {1}}));
}
