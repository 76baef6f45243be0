#pragma once
// Seeded random instances shared by unit and acceptance tests, plus a
// brute-force enumeration oracle that works on raw (x, y, z) index triples
// and never touches the library's marginal/conditional code.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pmitilt/dist_core.hpp"
#include "pmitilt/event_values.hpp"
#include "pmitilt/identification.hpp"
#include "pmitilt/soft_update.hpp"

namespace pmitilt::testing {

using Rng = std::mt19937_64;

inline std::vector<std::string> labels(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

// Dirichlet(shape, ..., shape) via normalized gamma draws.
inline std::vector<double> dirichlet(Rng& rng, std::size_t n, double shape = 1.0) {
  std::gamma_distribution<double> g(shape, 1.0);
  std::vector<double> out(n);
  double total = 0.0;
  for (auto& v : out) {
    do v = g(rng);
    while (!(v > 0.0));
    total += v;
  }
  for (auto& v : out) v /= total;
  return out;
}

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline std::size_t uniform_size(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// log-uniform on [lo, hi]
inline double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

// Three variables X, Y, Z with alphabets of size 2..4 and strictly positive
// Dirichlet masses. Cell order is row-major (x, y, z).
struct RandomJoint {
  std::size_t nx, ny, nz;
  std::vector<double> mass;
  JointTable table;

  double p(std::size_t x, std::size_t y, std::size_t z) const { return mass[(x * ny + y) * nz + z]; }
};

inline RandomJoint random_joint(Rng& rng, std::size_t lo = 2, std::size_t hi = 4) {
  const std::size_t nx = uniform_size(rng, lo, hi), ny = uniform_size(rng, lo, hi), nz = uniform_size(rng, lo, hi);
  std::vector<double> mass = dirichlet(rng, nx * ny * nz);
  std::vector<VariableSpec> vars{{"X", labels(nx)}, {"Y", labels(ny)}, {"Z", labels(nz)}};
  return RandomJoint{nx, ny, nz, mass, JointTable(vars, mass)};
}

inline Assignment xyz(std::size_t x, std::size_t y, std::size_t z) {
  return {{"X", std::to_string(x)}, {"Y", std::to_string(y)}, {"Z", std::to_string(z)}};
}

// Enumeration oracle over raw indices. Every quantity is a plain loop sum
// in long double.
struct Oracle {
  const RandomJoint& j;

  long double p_y(std::size_t y) const {
    long double s = 0;
    for (std::size_t x = 0; x < j.nx; ++x)
      for (std::size_t z = 0; z < j.nz; ++z) s += j.p(x, y, z);
    return s;
  }
  long double p_xy(std::size_t x, std::size_t y) const {
    long double s = 0;
    for (std::size_t z = 0; z < j.nz; ++z) s += j.p(x, y, z);
    return s;
  }
  long double p_yz(std::size_t y, std::size_t z) const {
    long double s = 0;
    for (std::size_t x = 0; x < j.nx; ++x) s += j.p(x, y, z);
    return s;
  }
  // P(x | y, z)
  double x_given_yz(std::size_t x, std::size_t y, std::size_t z) const {
    return static_cast<double>(j.p(x, y, z) / p_yz(y, z));
  }
  // P(z | y, x)
  double z_given_yx(std::size_t z, std::size_t y, std::size_t x) const {
    return static_cast<double>(j.p(x, y, z) / p_xy(x, y));
  }
  double x_given_y(std::size_t x, std::size_t y) const { return static_cast<double>(p_xy(x, y) / p_y(y)); }
  // log P(x|y,z) / P(x|y)
  double pmi(std::size_t x, std::size_t z, std::size_t y) const {
    return static_cast<double>(std::log((j.p(x, y, z) * p_y(y)) / (p_xy(x, y) * p_yz(y, z))));
  }
};

// Terminal values V(x, y, z) uniform in [-5, 5] on every full assignment.
inline EventValueFunction random_terminals(Rng& rng, const RandomJoint& j) {
  EventValueFunction v;
  for (std::size_t x = 0; x < j.nx; ++x)
    for (std::size_t y = 0; y < j.ny; ++y)
      for (std::size_t z = 0; z < j.nz; ++z) v.set(xyz(x, y, z), uniform(rng, -5.0, 5.0));
  return v;
}

// A shift c(context) uniform in [-5, 5] over every context of `dir`.
inline GaugeShift random_shift(Rng& rng, const JointTable& joint, const Direction& dir) {
  GaugeShift c;
  for (const auto& context : joint.enumerate(dir.context_names())) c.set(context, uniform(rng, -5.0, 5.0));
  return c;
}

// One soft-update slice with 2..max_n outcomes, alpha log-uniform in
// [0.1, 10] and rewards/terminals uniform in [-5, 5].
inline SoftUpdateProblem random_problem(Rng& rng, std::size_t min_n = 2, std::size_t max_n = 6) {
  const std::size_t n = uniform_size(rng, min_n, max_n);
  std::vector<double> reward(n), terminal(n);
  for (auto& r : reward) r = uniform(rng, -5.0, 5.0);
  for (auto& v : terminal) v = uniform(rng, -5.0, 5.0);
  SolverConfig config{log_uniform(rng, 0.1, 10.0)};
  return SoftUpdateProblem(DistVector::over_indices(dirichlet(rng, n)), std::move(reward), std::move(terminal),
                           config);
}

// A candidate absolutely continuous w.r.t. `prior`. Mixes dense Dirichlet
// draws with sparse ones and occasional point masses.
inline DistVector random_candidate(Rng& rng, const DistVector& prior) {
  std::vector<std::size_t> support;
  for (std::size_t k = 0; k < prior.size(); ++k)
    if (prior[k] > 0.0) support.push_back(k);
  std::vector<double> q(prior.size(), 0.0);
  const int kind = static_cast<int>(uniform_size(rng, 0, 9));
  if (kind == 0) {
    q[support[uniform_size(rng, 0, support.size() - 1)]] = 1.0;
  } else {
    const double shape = kind < 4 ? 0.2 : 1.0;
    const std::vector<double> w = dirichlet(rng, support.size(), shape);
    for (std::size_t i = 0; i < support.size(); ++i) q[support[i]] = w[i];
  }
  return DistVector(prior.over(), std::move(q));
}

}  // namespace pmitilt::testing
