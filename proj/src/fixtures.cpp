#include "pmitilt/fixtures.hpp"

namespace pmitilt::fixtures {

namespace {

std::vector<VariableSpec> bits() {
  return {{"X", {"0", "1"}}, {"Y", {"0", "1"}}, {"Z", {"0", "1"}}};
}

}  // namespace

JointTable f1() { return JointTable(bits(), std::vector<double>(8, 0.125)); }

JointTable f3() {
  // Row-major (x, y, z).
  std::vector<double> mass(8);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z) mass[4 * x + 2 * y + z] = x == z ? 0.2 : 0.05;
  return JointTable(bits(), std::move(mass));
}

}  // namespace pmitilt::fixtures
