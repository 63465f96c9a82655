#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "kz/shortmod.hpp"

using namespace kz;
using namespace kzt;

namespace {

ShortTable table(int e, int p, int q, std::vector<std::vector<Scalar>> rows) {
  return {Field::kDefaultPrime, e, p, q, Matrix::from_rows(rows, std::size_t(q))};
}

// All q-subsets of the ep pairs, in lex order.
std::vector<RowSelector> all_selectors(int e, int p, int q) {
  std::vector<RowSelector> out;
  std::vector<int> pick;
  auto rec = [&](auto&& self, int start) -> void {
    if (int(pick.size()) == q) {
      RowSelector s;
      for (int k : pick) s.s.emplace_back(k / p, k % p);
      out.push_back(s);
      return;
    }
    for (int k = start; k < e * p; ++k) {
      pick.push_back(k);
      self(self, k + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace

TEST(TableModule, ZeroTable) {
  GradedAlgebra A = squares(2);
  GradedModule M = table_to_module(A, table(2, 2, 3, std::vector<std::vector<Scalar>>(4, {0, 0, 0})));
  EXPECT_EQ(M.dims, (std::vector<std::size_t>{2, 3}));
  for (int l = 0; l < 2; ++l) EXPECT_TRUE(M.action(l, 0).is_zero());
  EXPECT_TRUE(validate_module(A, M).ok());
}

TEST(TableModule, SmallExample) {
  GradedAlgebra A = squares(2);
  GradedModule M = table_to_module(A, table(2, 1, 1, {{1}, {0}}));
  EXPECT_EQ(M.action(0, 0), mat({{1}}));
  EXPECT_EQ(M.action(1, 0), mat({{0}}));
  // Same as R / yR.
  GradedModule N = cyclic_quotient(A, {unit(2, 1)});
  EXPECT_EQ(N.dims, M.dims);
  EXPECT_EQ(N.act, M.act);
}

TEST(TableModule, RoundTrip) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const int e = 1 + int(rng() % 4), p = int(rng() % 4) + 1, q = int(rng() % 5);
    GradedAlgebra A = from_quadrics({e, {}}, 2);
    ShortTable T = random_table(e, p, q, A.prime, rng);
    GradedModule M = table_to_module(A, T);
    EXPECT_TRUE(validate_module(A, M).ok());
    EXPECT_EQ(module_to_table(M), T);
    EXPECT_EQ(module_to_table(shifted(M, -3)), T);
    EXPECT_EQ(table_to_module(A, module_to_table(M)).act, M.act);
  }
}

TEST(TableModule, Errors) {
  GradedAlgebra A = squares(2);
  EXPECT_THROW(table_to_module(A, table(3, 1, 1, {{0}, {0}, {0}})), ValidationError);
  GradedModule Z = residue_field(A);
  Z.dims = {0};
  EXPECT_THROW(module_to_table(Z), ValidationError);
  GradedModule R = regular_module(A);
  EXPECT_THROW(module_to_table(R), ValidationError);
}

TEST(TableMaps, IotaStar) {
  std::mt19937_64 rng(2);
  ShortTable T = random_table(3, 3, 2, 101, rng);
  EXPECT_EQ(iota_star(T, 3), T);
  EXPECT_EQ(iota_star(T, 1).C.rows, 3u);
  ShortTable H = table(2, 2, 1, {{1}, {2}, {3}, {4}});
  EXPECT_EQ(iota_star(H, 1).C, mat({{1}, {3}}));
  EXPECT_THROW(iota_star(H, 0), std::out_of_range);
  EXPECT_THROW(iota_star(H, 3), std::out_of_range);
}

TEST(TableMaps, PiStar) {
  std::mt19937_64 rng(3);
  ShortTable T = random_table(3, 2, 4, 101, rng);
  EXPECT_EQ(pi_star(T, 4), T);
  EXPECT_EQ(pi_star(T, 1).C.cols, 1u);
  ShortTable H = table(2, 1, 2, {{1, 2}, {3, 4}});
  EXPECT_EQ(pi_star(H, 1).C, mat({{1}, {3}}));
  EXPECT_THROW(pi_star(H, 3), std::out_of_range);
}

TEST(TableMaps, Surjective) {
  // Every target arises: pad a target table and map it back.
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    ShortTable S = random_table(3, 2, 2, 101, rng);
    ShortTable big = random_table(3, 4, 2, 101, rng);
    for (int l = 0; l < 3; ++l)
      for (int n = 0; n < 2; ++n)
        for (int h = 0; h < 2; ++h) big.C(big.row(l, n), std::size_t(h)) = S.C(S.row(l, n), std::size_t(h));
    EXPECT_EQ(iota_star(big, 2), S);
    ShortTable wide = random_table(3, 2, 5, 101, rng);
    for (std::size_t r = 0; r < 6; ++r)
      for (std::size_t h = 0; h < 2; ++h) wide.C(r, h) = S.C(r, h);
    EXPECT_EQ(pi_star(wide, 2), S);
  }
}

TEST(Selectors, DeterminantAndRank) {
  ShortTable W = conca_witness(3, 2, 3);
  EXPECT_TRUE(selector_det_nonzero(W, smallest_selector(3, 2, 3)));
  EXPECT_FALSE(selector_det_nonzero(W, largest_selector(3, 2, 3)));
  ShortTable Z = table(2, 1, 1, {{0}, {0}});
  EXPECT_FALSE(selector_det_nonzero(Z, smallest_selector(2, 1, 1)));
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    ShortTable T = random_table(3, 2, 3, 32003, rng);
    RowSelector s = all_selectors(3, 2, 3)[std::size_t(trial) % 20];
    std::vector<std::size_t> rows;
    for (auto [l, n] : s.s) rows.push_back(T.row(l, n));
    EXPECT_EQ(selector_det_nonzero(T, s), rank(T.field(), select_rows(T.C, rows)) == 3u);
  }
  EXPECT_THROW(selector_det_nonzero(W, smallest_selector(3, 2, 2)), std::invalid_argument);
}

TEST(Selectors, LZeroExamples) {
  EXPECT_FALSE(in_L0(table(2, 1, 1, {{0}, {0}})));
  EXPECT_TRUE(in_L0(conca_witness(4, 2, 6)));
  EXPECT_TRUE(in_L0(table(2, 1, 0, {{}, {}})));
}

TEST(Selectors, CoverProperty) {
  // rank C = q iff some q x q row minor is nonzero; exhaust selectors over F_2 and F_3.
  for (std::uint32_t P : {2u, 3u}) {
    std::mt19937_64 rng(P);
    for (int trial = 0; trial < 200; ++trial) {
      const int e = 1 + int(rng() % 3), p = 1 + int(rng() % 2), q = int(rng() % std::uint64_t(e * p + 1));
      ShortTable T = random_table(e, p, q, P, rng);
      bool any = false;
      for (const auto& s : all_selectors(e, p, q)) any = any || selector_det_nonzero(T, s);
      EXPECT_EQ(in_L0(T), any);
    }
  }
}

TEST(Selectors, Orders) {
  auto s = largest_selector(4, 2, 2);
  EXPECT_EQ(s.s, (std::vector<std::pair<int, int>>{{3, 0}, {3, 1}}));
  auto t = smallest_selector(4, 2, 3);
  EXPECT_EQ(t.s, (std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {1, 0}}));
}

TEST(Witness, ConcaExamples) {
  ShortTable W = conca_witness(2, 1, 1);
  EXPECT_EQ(W.C, mat({{1}, {0}}));
  ShortTable F = conca_witness(3, 2, 4);
  Matrix expect(6, 4);
  for (std::size_t k = 0; k < 4; ++k) expect(k, k) = 1;
  EXPECT_EQ(F.C, expect);
  EXPECT_THROW(conca_witness(3, 2, 5), std::invalid_argument);
}

TEST(Witness, AnnihilatedByLastVariable) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const int e = 2 + int(rng() % 3), p = 1 + int(rng() % 3);
    const int q = int(rng() % std::uint64_t((e - 1) * p + 1));
    GradedAlgebra A = from_quadrics({e, {}}, 2);
    ShortTable T = conca_witness(e, p, q);
    GradedModule M = table_to_module(A, T);
    EXPECT_TRUE(annihilated_by(M, unit(e, e - 1)));
    EXPECT_TRUE(in_L0(T));
  }
}

TEST(Witness, AnnihilatorExamples) {
  GradedAlgebra A = random_conca(3, 2, 1);
  std::mt19937_64 rng(7);
  int killed = 0;
  for (int trial = 0; trial < 20; ++trial)
    killed += annihilated_by(table_to_module(A, random_table(3, 2, 2, A.prime, rng)), unit(3, 2));
  EXPECT_EQ(killed, 0);
  GradedModule Z = residue_field(A);
  Z.dims = {0};
  EXPECT_TRUE(annihilated_by(Z, unit(3, 2)));
}

TEST(Witness, LargestSelector) {
  GradedAlgebra A = random_conca(4, 3, 9);
  ShortTable T = largest_selector_witness(A, 4, 2, 2);
  Matrix expect(8, 2);
  expect(6, 0) = 1;
  expect(7, 1) = 1;
  EXPECT_EQ(T.C, expect);
  EXPECT_TRUE(selector_det_nonzero(T, largest_selector(4, 2, 2)));
  EXPECT_EQ(largest_selector_witness(A, 4, 2, 0).C.cols, 0u);
  EXPECT_THROW(largest_selector_witness(A, 4, 2, 3), std::invalid_argument);
  // x_4 is not a Conca generator here.
  EXPECT_THROW(largest_selector_witness(remark_algebra(2, 5), 4, 1, 1), PreconditionError);
}

TEST(Presentation, FreeCokernel) {
  GradedAlgebra A = from_quadrics(monomial_presentation(2, {{0, 0}, {0, 1}, {1, 1}}), 2);
  ASSERT_TRUE(A.is_short());
  ShortTable T = presentation_to_table(A, {2, 2, Matrix(4, 0)}, false);
  EXPECT_EQ(T.C, Matrix::identity(4));
}

TEST(Presentation, CyclicByLinearForm) {
  GradedAlgebra A = squares(2);
  PresentationMatrix B{2, 1, mat({{0}, {1}})};
  ShortTable T = presentation_to_table(A, B, false);
  EXPECT_EQ(T.q, 1);
  EXPECT_EQ(T.C, mat({{1}, {0}}));
}

TEST(Presentation, Errors) {
  GradedAlgebra A = squares(2);
  EXPECT_THROW(presentation_to_table(A, {2, 1, mat({{1, 2}, {1, 2}})}, false), PreconditionError);
  // Without relations the cokernel is R itself and xy u survives in degree two.
  EXPECT_THROW(presentation_to_table(A, {2, 1, Matrix(2, 0)}, false), ValidationError);
  ShortTable T = presentation_to_table(A, {2, 1, Matrix(2, 0)}, true);
  EXPECT_EQ(T.C, Matrix::identity(2));
  EXPECT_THROW(presentation_to_table(xy_example(), {2, 1, mat({{1}, {0}})}, false), PreconditionError);
}

TEST(Presentation, InverseOfTable) {
  // Tables in L0 arise from their own relation matrix.
  std::mt19937_64 rng(8);
  GradedAlgebra A = random_conca(3, 2, 2, 101);
  for (int trial = 0; trial < 30; ++trial) {
    ShortTable T = random_table(3, 2, 3, 101, rng);
    if (!in_L0(T)) continue;
    Matrix B = transpose(kernel_rows(T.field(), transpose(T.C)));
    ShortTable U = presentation_to_table(A, {3, 2, B}, true);
    EXPECT_EQ(U.q, 3);
    // Same module up to a change of basis of M_1: equal row spaces of C^T.
    EXPECT_EQ(row_space(T.field(), transpose(U.C)).matrix, row_space(T.field(), transpose(T.C)).matrix);
  }
}

TEST(CyclicQuotient, Examples) {
  GradedAlgebra A = xy_example();
  GradedModule M = cyclic_quotient(A, {unit(2, 0)});
  EXPECT_EQ(M.dims, (std::vector<std::size_t>{1, 1, 1}));
  EXPECT_TRUE(validate_module(A, M).ok());
  GradedModule Q = cyclic_quotient(q_example(4), {unit(2, 0)});
  EXPECT_FALSE(Q.exact);
  EXPECT_EQ(Q.dims, (std::vector<std::size_t>{1, 1, 1, 1, 1}));
}
