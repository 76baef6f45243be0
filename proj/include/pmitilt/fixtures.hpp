#pragma once
//
// Canonical three-bit joints over variables X, Y, Z (alphabets {"0","1"}).
//
//   F1  independent fair bits, every cell 1/8.
//   F3  noisy copy: Y fair; given y, P(x,z|y) = 0.4 if x == z else 0.1.
//

#include "pmitilt/dist_core.hpp"

namespace pmitilt::fixtures {

JointTable f1();
JointTable f3();

}  // namespace pmitilt::fixtures
