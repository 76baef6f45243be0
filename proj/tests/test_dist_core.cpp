#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "pmitilt/dist_core.hpp"
#include "pmitilt/errors.hpp"
#include "pmitilt/fixtures.hpp"
#include "support/random_instances.hpp"

using namespace pmitilt;
using pmitilt::testing::Oracle;
using pmitilt::testing::Rng;

namespace {

// Oracle values from exact rational enumeration of the noisy-copy table.
constexpr double kLog16 = 0.47000362924573563;   // log 1.6
constexpr double kLog04 = -0.916290731874155;    // log 0.4

std::vector<VariableSpec> bits(std::initializer_list<const char*> names) {
  std::vector<VariableSpec> out;
  for (const char* n : names) out.push_back({n, {"0", "1"}});
  return out;
}

}  // namespace

TEST(Assignment, CanonicalOrderingAndMerge) {
  Assignment a{{"Z", "1"}, {"X", "0"}};
  Assignment b{{"X", "0"}, {"Z", "1"}};
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.to_string(), "X=0,Z=1");
  EXPECT_EQ(Assignment{}.to_string(), "{}");

  const Assignment m = a.merged({{"Y", "1"}});
  EXPECT_EQ(m.to_string(), "X=0,Y=1,Z=1");
  EXPECT_THROW(a.merged({{"X", "1"}}), SpecError);
  EXPECT_NO_THROW(a.merged({{"X", "0"}}));

  const std::vector<std::string> keep{"Z", "Q"};
  EXPECT_EQ(m.restricted(keep).to_string(), "Z=1");
}

TEST(JointTable, RejectsInvalidMass) {
  EXPECT_THROW(JointTable(bits({"X"}), {0.5, 0.6}), SpecError);
  EXPECT_THROW(JointTable(bits({"X"}), {1.5, -0.5}), SpecError);
  EXPECT_THROW(JointTable(bits({"X"}), {1.0}), SpecError);
  EXPECT_THROW(JointTable({{"X", {"a", "a"}}}, {0.5, 0.5}), SpecError);
  EXPECT_THROW(JointTable({{"X", {}}}, {}), SpecError);
  EXPECT_THROW(JointTable({{"X", {"0"}}, {"X", {"0"}}}, {1.0}), SpecError);
}

TEST(JointTable, LooseToleranceRescales) {
  const JointTable t(bits({"X"}), {0.5, 0.5 + 5e-10}, 1e-9);
  EXPECT_NEAR(t.masses()[0] + t.masses()[1], 1.0, 1e-15);
  EXPECT_THROW(JointTable(bits({"X"}), {0.5, 0.5 + 5e-10}), SpecError);
}

TEST(JointTable, SparseCells) {
  const JointTable t = JointTable::from_cells(bits({"X", "Y"}), {{{{"X", "0"}, {"Y", "1"}}, 0.25},
                                                                 {{{"X", "1"}, {"Y", "1"}}, 0.75}});
  EXPECT_EQ(t.mass({{"X", "0"}, {"Y", "0"}}), 0.0);
  EXPECT_EQ(t.probability({{"Y", "1"}}), 1.0);
  EXPECT_EQ(t.probability({}), 1.0);
  EXPECT_THROW(JointTable::from_cells(bits({"X"}), {{{{"X", "0"}}, 0.5}, {{{"X", "0"}}, 0.5}}), SpecError);
  EXPECT_THROW(JointTable::from_cells(bits({"X", "Y"}), {{{{"X", "0"}}, 1.0}}), SpecError);
  EXPECT_THROW(t.probability({{"X", "7"}}), SpecError);
  EXPECT_THROW(t.probability({{"W", "0"}}), SpecError);
}

TEST(Marginal, IndependentBitsGiveUniform) {
  const JointTable m = marginal(fixtures::f1(), {"X"});
  ASSERT_EQ(m.cell_count(), 2u);
  EXPECT_EQ(m.masses()[0], 0.5);
  EXPECT_EQ(m.masses()[1], 0.5);
}

TEST(Marginal, KeepAllIsIdentity) {
  const JointTable f3 = fixtures::f3();
  EXPECT_EQ(marginal(f3, {"X", "Y", "Z"}), f3);
  // Order of the keep list does not matter.
  EXPECT_EQ(marginal(f3, {"Z", "X", "Y"}), f3);
}

TEST(Marginal, NoisyCopyXY) {
  const JointTable m = marginal(fixtures::f3(), {"X", "Y"});
  for (double p : m.masses()) EXPECT_NEAR(p, 0.25, 1e-15);
}

TEST(Marginal, UnknownVariable) { EXPECT_THROW(marginal(fixtures::f1(), {"W"}), SpecError); }

TEST(Marginal, IdempotentExactlyOnDyadicTables) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    // Masses k/256 add exactly in binary floating point.
    std::vector<double> w(24);
    int remaining = 256;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      const int k = static_cast<int>(pmitilt::testing::uniform_size(rng, 0, std::min(remaining, 20)));
      w[i] = k / 256.0;
      remaining -= k;
    }
    w.back() = remaining / 256.0;
    const JointTable j({{"X", {"0", "1"}}, {"Y", {"0", "1", "2"}}, {"Z", {"0", "1", "2", "3"}}}, w);
    EXPECT_EQ(marginal(marginal(j, {"X", "Y"}), {"X"}), marginal(j, {"X"}));
    EXPECT_EQ(marginal(marginal(j, {"Y", "Z"}), {"Z"}), marginal(j, {"Z"}));
  }
}

TEST(Marginal, IdempotentWithinUlpsOnRandomTables) {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const auto rj = pmitilt::testing::random_joint(rng);
    const JointTable nested = marginal(marginal(rj.table, {"X", "Z"}), {"X"});
    const JointTable direct = marginal(rj.table, {"X"});
    ASSERT_EQ(nested.cell_count(), direct.cell_count());
    for (std::size_t k = 0; k < direct.cell_count(); ++k) {
      EXPECT_NEAR(nested.masses()[k], direct.masses()[k], 4 * std::numeric_limits<double>::epsilon());
    }
  }
}

TEST(Conditional, Fixtures) {
  const Assignment ctx{{"Y", "0"}, {"Z", "0"}};
  const DistVector u = conditional(fixtures::f1(), {"X"}, ctx);
  EXPECT_EQ(u[0], 0.5);
  EXPECT_EQ(u[1], 0.5);
  const DistVector c = conditional(fixtures::f3(), {"X"}, ctx);
  EXPECT_NEAR(c[0], 0.8, 1e-15);
  EXPECT_NEAR(c[1], 0.2, 1e-15);
  EXPECT_EQ(c.outcome(1).to_string(), "X=1");
}

TEST(Conditional, ZeroMassContext) {
  const JointTable j = JointTable::from_cells(bits({"X", "Y"}), {{{{"X", "0"}, {"Y", "0"}}, 0.5},
                                                                 {{{"X", "1"}, {"Y", "0"}}, 0.5}});
  EXPECT_THROW(conditional(j, {"X"}, {{"Y", "1"}}), ZeroMassContext);
  EXPECT_THROW(conditional(j, {"X"}, {{"X", "0"}}), SpecError);  // target overlaps context
}

TEST(Conditional, MatchesEnumerationOracle) {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto rj = pmitilt::testing::random_joint(rng);
    const Oracle o{rj};
    for (std::size_t y = 0; y < rj.ny; ++y)
      for (std::size_t z = 0; z < rj.nz; ++z) {
        const DistVector c = conditional(rj.table, {"X"}, {{"Y", std::to_string(y)}, {"Z", std::to_string(z)}});
        for (std::size_t x = 0; x < rj.nx; ++x) EXPECT_NEAR(c[x], o.x_given_yz(x, y, z), 1e-14);
      }
  }
}

TEST(Pmi, Fixtures) {
  const Assignment x0{{"X", "0"}}, x1{{"X", "1"}}, z0{{"Z", "0"}}, y0{{"Y", "0"}};
  EXPECT_EQ(pmi(fixtures::f1(), x0, z0, y0), 0.0);
  EXPECT_NEAR(pmi(fixtures::f3(), x0, z0, y0), kLog16, 1e-12);
  EXPECT_NEAR(pmi(fixtures::f3(), x1, z0, y0), kLog04, 1e-12);
}

TEST(Pmi, ZeroCellsAndUndefinedCases) {
  // P(x=1 | y=0, z=0) = 0 while P(x=1 | y=0) > 0.
  const auto vars = bits({"X", "Y", "Z"});
  const JointTable j = JointTable::from_cells(vars, {{{{"X", "0"}, {"Y", "0"}, {"Z", "0"}}, 0.25},
                                                     {{{"X", "1"}, {"Y", "0"}, {"Z", "1"}}, 0.25},
                                                     {{{"X", "0"}, {"Y", "0"}, {"Z", "1"}}, 0.5}});
  EXPECT_EQ(pmi(j, {{"X", "1"}}, {{"Z", "0"}}, {{"Y", "0"}}), -std::numeric_limits<double>::infinity());
  EXPECT_THROW(pmi(j, {{"X", "0"}}, {{"Z", "0"}}, {{"Y", "1"}}), ZeroMassContext);

  const JointTable k = JointTable::from_cells(vars, {{{{"X", "0"}, {"Y", "0"}, {"Z", "0"}}, 0.5},
                                                     {{{"X", "0"}, {"Y", "0"}, {"Z", "1"}}, 0.5}});
  EXPECT_THROW(pmi(k, {{"X", "1"}}, {{"Z", "0"}}, {{"Y", "0"}}), UndefinedPMI);

  const JointTable m = JointTable::from_cells(vars, {{{{"X", "0"}, {"Y", "0"}, {"Z", "0"}}, 1.0}});
  EXPECT_THROW(pmi(m, {{"X", "0"}}, {{"Z", "1"}}, {{"Y", "0"}}), ZeroMassContext);
}

TEST(Pmi, SymmetricBitForBit) {
  Rng rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const auto rj = pmitilt::testing::random_joint(rng, 2, 3);
    // Swap roles: i(x;z|y) computed as pmi(x, z, y) and as pmi(z, x, y).
    for (std::size_t x = 0; x < rj.nx; ++x)
      for (std::size_t y = 0; y < rj.ny; ++y)
        for (std::size_t z = 0; z < rj.nz; ++z) {
          const Assignment xa{{"X", std::to_string(x)}}, ya{{"Y", std::to_string(y)}}, za{{"Z", std::to_string(z)}};
          EXPECT_EQ(pmi(rj.table, xa, za, ya), pmi(rj.table, za, xa, ya));
        }
  }
}

TEST(Pmi, NormalizesAndReconstructsConditional) {
  Rng rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    const auto rj = pmitilt::testing::random_joint(rng);
    const Oracle o{rj};
    for (std::size_t y = 0; y < rj.ny; ++y)
      for (std::size_t z = 0; z < rj.nz; ++z) {
        const Assignment ya{{"Y", std::to_string(y)}}, za{{"Z", std::to_string(z)}};
        const DistVector prior = conditional(rj.table, {"X"}, ya);
        const DistVector post = conditional(rj.table, {"X"}, ya.merged(za));
        double total = 0.0;
        for (std::size_t x = 0; x < rj.nx; ++x) {
          const double i = pmi(rj.table, {{"X", std::to_string(x)}}, za, ya);
          EXPECT_NEAR(i, o.pmi(x, z, y), 1e-12);
          total += prior[x] * std::exp(i);
          EXPECT_NEAR(post[x], prior[x] * std::exp(i), 1e-12);
        }
        EXPECT_NEAR(total, 1.0, 1e-10);
      }
  }
}

TEST(DistVector, Validation) {
  EXPECT_THROW(DistVector::over_indices({0.5, 0.4}), SpecError);
  EXPECT_THROW(DistVector::over_indices({1.2, -0.2}), SpecError);
  EXPECT_THROW(DistVector(bits({"X"}), {1.0}), SpecError);
  const DistVector d = DistVector::over_indices({0.25, 0.75});
  EXPECT_EQ(d.index_of({{"X", "1"}}), 1u);
  EXPECT_DOUBLE_EQ(total_variation(d, DistVector::over_indices({0.75, 0.25})), 0.5);
  EXPECT_THROW(total_variation(d, DistVector::over_indices({1.0, 0.0, 0.0})), SpecError);
}
