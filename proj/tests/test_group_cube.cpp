#include <gtest/gtest.h>

#include <set>

#include "nilkit/group_cube.hpp"

using namespace nilkit;

namespace {

using El = FiniteAbelianGroup::Element;

El e1(std::int64_t a) {
  El x(1);
  x(0) = a;
  return x;
}

GroupCube cyc(int n, std::vector<std::int64_t> v) {
  std::vector<El> out;
  for (auto a : v) out.push_back(e1(a));
  return GroupCube(n, std::move(out));
}

std::vector<std::int64_t> values(const GroupCube& q) {
  std::vector<std::int64_t> out;
  for (Vertex v = 0; v < q.size(); ++v) out.push_back(q[v](0));
  return out;
}

const FiniteAbelianGroup Z5 = FiniteAbelianGroup::cyclic(5);

}  // namespace

TEST(Group, ParseAndIndex) {
  const auto g = FiniteAbelianGroup::parse("Z_2 x Z3");
  EXPECT_EQ(g.cyclic_orders(), (std::vector<std::int64_t>{2, 3}));
  EXPECT_EQ(g.order(), 6);
  for (std::int64_t i = 0; i < 6; ++i) EXPECT_EQ(g.index(g.element(i)), i);
  EXPECT_EQ(g.element(1)(0), 1);  // first coordinate varies fastest
  EXPECT_THROW(FiniteAbelianGroup::parse("Q5"), ParseError);
  EXPECT_THROW(FiniteAbelianGroup({0}), MismatchError);
}

TEST(Parallelepiped, Examples) {
  auto q0 = make_parallelepiped(Z5, e1(0), {});
  EXPECT_EQ(q0.dimension(), 0);
  EXPECT_EQ(values(q0), (std::vector<std::int64_t>{0}));
  EXPECT_EQ(values(make_parallelepiped(Z5, e1(0), {e1(1), e1(2)})),
            (std::vector<std::int64_t>{0, 1, 2, 3}));
  EXPECT_EQ(values(make_parallelepiped(Z5, e1(4), {e1(3)})), (std::vector<std::int64_t>{4, 2}));
}

TEST(GrayCode, Examples) {
  EXPECT_EQ(gray_code(Z5, cyc(2, {3, 3, 3, 3}))(0), 0);
  EXPECT_EQ(gray_code(Z5, cyc(2, {0, 1, 2, 3}))(0), 0);
  EXPECT_EQ(gray_code(Z5, cyc(2, {0, 1, 2, 4}))(0), 1);
}

TEST(IsCubeDk, Examples) {
  EXPECT_TRUE(is_cube_Dk(Z5, cyc(1, {2, 4}), 1));
  EXPECT_TRUE(is_cube_Dk(Z5, cyc(2, {0, 1, 2, 3}), 1));
  EXPECT_FALSE(is_cube_Dk(Z5, cyc(2, {0, 1, 2, 4}), 1));
  EXPECT_TRUE(is_cube_Dk(Z5, cyc(2, {0, 1, 2, 4}), 2));
}

TEST(Concatenate, Examples) {
  EXPECT_EQ(values(concatenate(cyc(1, {0, 1}), cyc(1, {1, 2}))), (std::vector<std::int64_t>{0, 2}));
  EXPECT_EQ(values(concatenate(cyc(1, {3, 3}), cyc(1, {3, 3}))), (std::vector<std::int64_t>{3, 3}));
  EXPECT_EQ(values(concatenate(cyc(2, {0, 1, 2, 3}), cyc(2, {1, 4, 3, 1}))),
            (std::vector<std::int64_t>{0, 4, 2, 1}));
  EXPECT_THROW(concatenate(cyc(1, {0, 1}), cyc(1, {2, 2})), MismatchError);
  EXPECT_FALSE(adjacent(cyc(2, {0, 1, 2, 3}), cyc(2, {2, 3, 0, 0})));
}

TEST(Automorphism, Examples) {
  const auto q = cyc(2, {0, 1, 2, 3});
  EXPECT_EQ(apply_automorphism(q, CubeAutomorphism::identity(2)), q);
  const CubeAutomorphism reflect({0}, 1);
  EXPECT_EQ(values(apply_automorphism(cyc(1, {0, 1}), reflect)), (std::vector<std::int64_t>{1, 0}));
  EXPECT_EQ(reflect.reflections(), 1);
  EXPECT_EQ(values(apply_automorphism(cyc(2, {1, 2, 3, 4}), CubeAutomorphism({1, 0}, 0))),
            (std::vector<std::int64_t>{1, 3, 2, 4}));
  EXPECT_EQ(all_automorphisms(2).size(), 8u);
  EXPECT_EQ(all_automorphisms(3).size(), 48u);
  EXPECT_THROW(CubeAutomorphism({0, 0}, 0), MismatchError);
}

TEST(Enumerate, Counts) {
  EXPECT_EQ(enumerate_cubes(FiniteAbelianGroup::cyclic(2), 1).size(), 4u);
  EXPECT_EQ(enumerate_cubes(Z5, 2).size(), 125u);
  EXPECT_EQ(enumerate_cubes(FiniteAbelianGroup::cyclic(3), 3).size(), 81u);
  EXPECT_EQ(cube_count(Z5, 2, 2), 625u);
  EXPECT_EQ(enumerate_cubes(Z5, 2, 2).size(), 625u);
}

TEST(Enumerate, BudgetReportsRequiredCount) {
  try {
    enumerate_cubes(Z5, 3, 1, 100);
    FAIL() << "expected BudgetExceeded";
  } catch (const BudgetExceeded& e) {
    EXPECT_EQ(e.required(), 625u);
    EXPECT_EQ(e.budget(), 100u);
  }
}

TEST(Enumerate, DistinctAndDegreeK) {
  for (int k = 1; k <= 2; ++k) {
    std::set<std::vector<std::int64_t>> seen;
    for (const auto& q : enumerate_cubes(FiniteAbelianGroup::cyclic(3), 3, k)) {
      EXPECT_TRUE(is_cube_Dk(FiniteAbelianGroup::cyclic(3), q, k));
      seen.insert(values(q));
    }
    EXPECT_EQ(seen.size(), cube_count(FiniteAbelianGroup::cyclic(3), 3, k));
  }
}

TEST(Sample, SeededAndValid) {
  const auto g = FiniteAbelianGroup::parse("Z4xZ6");
  EXPECT_EQ(sample_cube(g, 3, std::uint64_t{9}), sample_cube(g, 3, std::uint64_t{9}));
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    EXPECT_TRUE(is_cube_Dk(g, sample_cube(g, 3, rng, 1), 1));
    EXPECT_TRUE(is_cube_Dk(g, sample_cube(g, 4, rng, 2), 2));
  }
}

// ---------------------------------------------------------------------------
// Invariants

TEST(GroupCubeProperty, GrayCodeAutomorphismSign) {
  for (int n = 1; n <= 3; ++n) {
    const auto autos = all_automorphisms(n);
    for (const auto& q : enumerate_cubes(Z5, n)) {
      const auto s = gray_code(Z5, q);
      for (const auto& t : autos) {
        const auto expected = (t.reflections() & 1) ? Z5.neg(s) : s;
        ASSERT_EQ(gray_code(Z5, apply_automorphism(q, t)), expected);
      }
    }
  }
  // Non-parallelepiped cubes exercise the sign too.
  const auto q = cyc(2, {0, 1, 2, 4});
  EXPECT_EQ(gray_code(Z5, apply_automorphism(q, CubeAutomorphism({0, 1}, 1)))(0), 4);
}

TEST(GroupCubeProperty, GrayCodeConcatenationAdditive) {
  const auto Z3 = FiniteAbelianGroup::cyclic(3);
  for (int n = 1; n <= 2; ++n) {
    // All 3^{2^n} cubes of D_n(Z_3), so that Gray codes are not all zero.
    const auto cubes = enumerate_cubes(Z3, n, n);
    for (const auto& q1 : cubes) {
      for (const auto& q2 : cubes) {
        if (!adjacent(q1, q2)) continue;
        ASSERT_EQ(gray_code(Z3, concatenate(q1, q2)), Z3.add(gray_code(Z3, q1), gray_code(Z3, q2)));
      }
    }
  }
}

TEST(GroupCubeProperty, ParallelepipedsAreCubes) {
  for (std::int64_t N = 1; N <= 7; ++N) {
    const auto g = FiniteAbelianGroup::cyclic(N);
    for (int n = 0; n <= 3; ++n) {
      for_each_cube(g, n, [&](const GroupCube& q) { ASSERT_TRUE(is_cube_Dk(g, q, 1)); });
    }
  }
}

TEST(GroupCubeProperty, FaceRestrictionIsEnumerated) {
  const auto Z3 = FiniteAbelianGroup::cyclic(3);
  for (int n = 1; n <= 3; ++n) {
    for (int d = 0; d < n; ++d) {
      std::set<std::vector<std::int64_t>> lower;
      for (const auto& q : enumerate_cubes(Z3, d)) lower.insert(values(q));
      for (const auto& q : enumerate_cubes(Z3, n)) {
        for (const auto& f : faces(n, d)) ASSERT_TRUE(lower.count(values(restrict_to(q, f))));
      }
    }
  }
}

TEST(Faces, CountsAndCanonicalOrder) {
  EXPECT_EQ(faces(3, 1).size(), 12u);
  EXPECT_EQ(faces(3, 2).size(), 6u);
  // Weight first; then lexicographic on (v_1, ..., v_n).
  EXPECT_EQ(canonical_vertex_order(2), (std::vector<Vertex>{0, 2, 1, 3}));
  EXPECT_EQ(canonical_vertex_order(3), (std::vector<Vertex>{0, 4, 2, 1, 6, 5, 3, 7}));
  const Face f = Face::upper(3, 0b101);
  EXPECT_EQ(f.codimension(), 2);
  EXPECT_TRUE(f.contains(0b111));
  EXPECT_FALSE(f.contains(0b011));
}

TEST(Morphisms, ConstantsOnlyForCoprimeOrders) {
  const auto Z3 = FiniteAbelianGroup::cyclic(3), Z2 = FiniteAbelianGroup::cyclic(2);
  EXPECT_EQ(find_morphisms(Z3, 1, Z2, 2).size(), 2u);
  EXPECT_EQ(find_morphisms(FiniteAbelianGroup::cyclic(4), 1, Z3, 1).size(), 3u);
  // With matching orders the affine maps are morphisms: |Z5|^2 of them.
  EXPECT_EQ(find_morphisms(Z5, 1, Z5, 1).size(), 25u);
  // Degree 2 targets take all quadratic maps: 5^3.
  EXPECT_EQ(find_morphisms(Z5, 1, Z5, 2).size(), 125u);
}
