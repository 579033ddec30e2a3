#include "behav/model_io.hpp"
#include "behav/trajectory.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace behav;
using namespace behav::testing;

TEST(Trajectory, Extensions) {
  const auto f = Trajectory::scalar_finite_support(2, {1, 2});
  EXPECT_EQ(f.at(1, 0), 0);
  EXPECT_EQ(f.at(3, 0), 2);
  EXPECT_EQ(f.at(100, 0), 0);

  const auto qc = Trajectory::quasi_constant({7}, 0, {{1}});
  EXPECT_EQ(qc.at(0, 0), 1);
  EXPECT_EQ(qc.at(-5, 0), 7);
  EXPECT_EQ(qc.at(5, 0), 7);

  const auto p = Trajectory::periodic(0, {{1}, {2}, {3}});
  EXPECT_EQ(p.at(3, 0), 1);
  EXPECT_EQ(p.at(-1, 0), 3);
  EXPECT_EQ(p.at(7, 0), 2);

  const auto b = Trajectory::scalar_bounded(1, {1, 1});
  EXPECT_TRUE(b.defined_at(2));
  EXPECT_FALSE(b.defined_at(3));
  EXPECT_THROW(b.at(3, 0), std::out_of_range);
}

TEST(Trajectory, DimensionMismatch) {
  EXPECT_THROW(Trajectory::zero(1) + Trajectory::zero(2), DimensionError);
  EXPECT_THROW(apply(PolyMatrix::identity(2), Trajectory::zero(1)), DimensionError);
}

TEST(Apply, ExampleOneConstant) {
  const PolyMatrix m{{s * s - s + 1}};
  const Trajectory out = apply(m, Trajectory::constant({1}));
  EXPECT_EQ(out.extension(), Extension::QuasiConstant);
  EXPECT_TRUE(equivalent(out, Trajectory::constant({1})));
}

TEST(Apply, IdentityIsNeutral) {
  Rng rng(21);
  for (int t = 0; t < 20; ++t) {
    const Trajectory w = random_finite(rng, 3);
    EXPECT_TRUE(equivalent(apply(PolyMatrix::identity(3), w), w));
  }
}

TEST(Apply, ExampleOneRampPrefix) {
  const PolyMatrix m{{s * s - s + 1}};
  const auto w = Trajectory::bounded(1, {{1}, {1}, {Rational(3, 2)}, {2}, {Rational(5, 2)}});
  const Trajectory out = apply(m, w);
  EXPECT_EQ(out.window().first, 1);
  EXPECT_EQ(out.window().last, 3);
  for (std::int64_t k = 1; k <= 3; ++k) EXPECT_LE(out.at(k, 0), 2);
}

TEST(Apply, BoundedInteriorOnly) {
  const PolyMatrix m{{s_inv + s}};
  const Trajectory out = apply(m, Trajectory::scalar_bounded(0, {1, 2, 3, 4}));
  EXPECT_EQ(out.window().first, 1);
  EXPECT_EQ(out.window().last, 2);
  EXPECT_EQ(out.at(1, 0), 4);
  EXPECT_EQ(out.at(2, 0), 6);
  EXPECT_THROW(apply(m, Trajectory::scalar_bounded(0, {1, 2})), std::invalid_argument);
}

TEST(Apply, PeriodicStaysPeriodic) {
  const PolyMatrix m{{s - 1}};
  const Trajectory out = apply(m, Trajectory::periodic(0, {{0}, {1}}));
  EXPECT_EQ(out.extension(), Extension::Periodic);
  EXPECT_EQ(out.at(0, 0), 1);
  EXPECT_EQ(out.at(1, 0), -1);
  EXPECT_EQ(out.at(11, 0), -1);
}

TEST(Apply, FiniteSupportMatchesDefinition) {
  Rng rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const PolyMatrix m = random_matrix(rng, 2, 2, -2, 2);
    const Trajectory w = random_finite(rng, 2);
    const Trajectory out = apply(m, w);
    for (std::int64_t k = -12; k <= 12; ++k)
      for (std::size_t i = 0; i < 2; ++i) {
        Rational expect = 0;
        for (std::size_t j = 0; j < 2; ++j)
          for (int d = -2; d <= 2; ++d) expect += m(i, j).coeff(d) * w.at(k + d, j);
        EXPECT_EQ(out.at(k, i), expect);
      }
  }
}

TEST(Apply, Composition) {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const PolyMatrix a = random_matrix(rng, 2, 3), b = random_matrix(rng, 3, 2);
    const Trajectory w = random_finite(rng, 2), v = random_finite(rng, 2);
    EXPECT_TRUE(equivalent(apply(mat_mul(a, b), w), apply(a, apply(b, w))));
    EXPECT_TRUE(equivalent(apply(b, w + v), apply(b, w) + apply(b, v)));
  }
}

TEST(InnerProduct, SpikeAgainstConstant) {
  const Trajectory spike = Trajectory::spike(3, 0, 0, 1);
  EXPECT_EQ(inner_product(spike, Trajectory::constant({5, 9, 9})), 5);
  EXPECT_EQ(inner_product(Trajectory::zero(3), Trajectory::constant({5, 9, 9})), 0);
}

TEST(InnerProduct, CertificateAgainstBounds) {
  const Certificate cert = example4_certificate();
  const Trajectory g = Trajectory::constant({5, -1, 5, 5, 1, 1});
  // brute-force sum over the support
  Rational sum = 0;
  for (std::int64_t k = -10; k <= 10; ++k)
    for (std::size_t i = 0; i < 6; ++i) sum += cert.z->at(k, i) * g.at(k, i);
  EXPECT_EQ(sum, -3);
  EXPECT_EQ(inner_product(*cert.z, g), -3);
  EXPECT_EQ(inner_product(g, *cert.z), -3);
}

TEST(InnerProduct, RejectsInfiniteOverlap) {
  EXPECT_THROW(inner_product(Trajectory::constant({1}), Trajectory::constant({1})),
               std::invalid_argument);
  EXPECT_THROW(inner_product(Trajectory::periodic(0, {{1}}), Trajectory::constant({1})),
               std::invalid_argument);
}

TEST(InnerProduct, Bilinear) {
  Rng rng(24);
  for (int trial = 0; trial < 50; ++trial) {
    const Trajectory a = random_finite(rng, 2), b = random_finite(rng, 2),
                     c = random_finite(rng, 2);
    const Rational alpha = rng.rational(-3, 3, 2);
    EXPECT_EQ(inner_product(a + b, c), inner_product(a, c) + inner_product(b, c));
    EXPECT_EQ(inner_product(alpha * a, c), alpha * inner_product(a, c));
    EXPECT_EQ(inner_product(c, a + b), inner_product(c, a) + inner_product(c, b));
  }
}

TEST(InnerProduct, AdjointIdentity) {
  Rng rng(25);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t rows = static_cast<std::size_t>(rng.uniform(1, 3));
    const std::size_t cols = static_cast<std::size_t>(rng.uniform(1, 3));
    const PolyMatrix m = random_matrix(rng, rows, cols, -2, 2);
    const Trajectory w = random_finite(rng, cols), y = random_finite(rng, rows);
    EXPECT_EQ(inner_product(apply(m, w), y), inner_product(w, apply(adjoint(m), y)));
  }
}

TEST(Orthant, Examples) {
  EXPECT_TRUE(orthant_check(Trajectory::zero(2)));
  EXPECT_FALSE(orthant_check(Trajectory::spike(1, 0, 3, -1)));
  EXPECT_TRUE(orthant_check(*example4_certificate().z));
  EXPECT_FALSE(orthant_check(Trajectory::quasi_constant({-1}, 0, {{1}})));
}

TEST(Satisfies, ExampleOneSequences) {
  const PolyMatrix m{{s * s - s + 1}};
  const Trajectory two = Trajectory::constant({2});
  const auto decay = Trajectory::bounded(1, {{1}, {1}, {Rational(1, 2)}, {0}, {0}, {0}});
  EXPECT_TRUE(satisfies(m, decay, two, Relation::LessEqual));
  EXPECT_TRUE(satisfies(m, Trajectory::constant({1}), two, Relation::LessEqual));
  EXPECT_FALSE(satisfies(m, Trajectory::constant({3}), two, Relation::LessEqual));
}

TEST(Satisfies, ExampleTwoZero) {
  const BehavioralSystem sys = example2();
  EXPECT_TRUE(satisfies(*sys.H, Trajectory::zero(2), *sys.g, Relation::LessEqual));
}

TEST(Satisfies, EqualityAndDimension) {
  const PolyMatrix m{{s - 1}};
  EXPECT_TRUE(satisfies(m, Trajectory::constant({4}), Trajectory::zero(1), Relation::Equal));
  EXPECT_FALSE(satisfies(m, Trajectory::scalar_finite_support(0, {1}), Trajectory::zero(1),
                         Relation::Equal));
  EXPECT_THROW(satisfies(m, Trajectory::zero(1), Trajectory::zero(2), Relation::Equal),
               DimensionError);
}

TEST(Trajectory, EquivalenceIgnoresRepresentation) {
  const auto a = Trajectory::quasi_constant({1}, 0, {{1}, {1}});
  EXPECT_TRUE(equivalent(a, Trajectory::constant({1})));
  EXPECT_FALSE(equivalent(Trajectory::quasi_constant({1}, 0, {{2}}), Trajectory::constant({1})));
  EXPECT_TRUE(equivalent(Trajectory::periodic(0, {{1}, {1}}), Trajectory::periodic(3, {{1}})));
}

TEST(TrajectoryCsv, RoundTrip) {
  Rng rng(26);
  std::vector<Trajectory> samples{
      random_finite(rng, 2), Trajectory::quasi_constant({Rational(1, 3), 2}, -1, {{0, 1}}),
      Trajectory::periodic(2, {{1, 2}, {3, 4}}), Trajectory::bounded(0, {{1, 2}})};
  for (const auto& t : samples) {
    std::ostringstream out;
    write_trajectory_csv(out, t, {"a", "b"}, {{"note", "x"}});
    const TrajectoryFile back = read_trajectory_csv(out.str());
    EXPECT_EQ(back.trajectory.extension(), t.extension());
    EXPECT_TRUE(equivalent(back.trajectory, t)) << out.str();
    EXPECT_EQ(back.names, (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(back.metadata.at("note"), "x");
  }
}

TEST(TrajectoryCsv, ShippedSequences) {
  const auto ramp = read_trajectory_csv(slurp(models_dir() + "/example1_ramp.csv")).trajectory;
  EXPECT_EQ(ramp.extension(), Extension::Bounded);
  EXPECT_EQ(ramp.at(3, 0), Rational(3, 2));
  EXPECT_THROW(read_trajectory_csv("k,a\n0,1\n2,1\n"), ParseError);
}
