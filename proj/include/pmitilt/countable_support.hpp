#pragma once
//
// Log-normalizer of an exponential tilt over a countable outcome index
// n = 0, 1, 2, ...:
//
//   Z = sum_n p_n exp{payoff(n)}
//
// Z is computed by truncation at N with a certificate built from analytic
// bounds supplied with the family. Finiteness of Z is only semidecidable, so
// the result is three-valued: finite (tail bound below eps * partial sum),
// diverged (partial sums explode with nondecreasing terms), or inconclusive.
//

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pmitilt {

struct CountableFamily {
  // log p_n (-inf for p_n = 0).
  std::function<double(std::uint64_t)> log_mass;
  // log T(N), with T(N) >= sum_{n > N} p_n, nonincreasing, T -> 0.
  std::function<double(std::uint64_t)> log_tail_mass;
  // alpha [r(n) + V(n)].
  std::function<double(std::uint64_t)> payoff;
  // B(N) >= sup_{n > N} payoff(n). May be +inf for unbounded payoffs.
  std::function<double(std::uint64_t)> payoff_bound;
  // Optional sharper bound on log sum_{n > N} p_n exp{payoff(n)}. When absent
  // the certificate uses log T(N) + B(N).
  std::function<double(std::uint64_t)> log_tilted_tail;
  // Last index with positive mass for finitely supported families.
  std::optional<std::uint64_t> last_index;
};

// Building blocks for the built-in families.
struct GeometricPrior {
  double q = 0.5;  // p_n = (1 - q) q^n, 0 < q < 1
};
struct LinearPayoff {
  double slope = 0.0;
  double intercept = 0.0;  // payoff(n) = intercept + slope * n
};

// Geometric prior with linear payoff; a constant payoff is slope 0. Tail
// bounds are exact: T(N) = q^{N+1} and, when q e^slope < 1, the tilted tail
// is (1-q) e^intercept (q e^slope)^{N+1} / (1 - q e^slope).
CountableFamily geometric_family(GeometricPrior prior, LinearPayoff payoff);

// A finite problem embedded with zero mass beyond the last index.
// `prior` must be a probability vector and `payoff` the matching alpha [r + V].
CountableFamily finite_family(std::vector<double> prior, std::vector<double> payoff);

enum class CertificateStatus { Finite, Diverged, Inconclusive };
const char* to_string(CertificateStatus status) noexcept;

struct TruncationCertificate {
  std::uint64_t N = 0;            // indices 0..N were summed
  double partial = 0.0;           // sum_{n <= N} p_n exp{payoff(n)}
  double log_partial = 0.0;
  double tail_bound = 0.0;        // bound on sum_{n > N} p_n exp{payoff(n)}
  double log_tail_bound = 0.0;
  CertificateStatus status = CertificateStatus::Inconclusive;
};

struct TruncationOptions {
  std::uint64_t initial_N = 16;
  int max_doublings = 40;
  // Hard cap on summed terms; hitting it ends the search as inconclusive.
  std::uint64_t max_terms = std::uint64_t{1} << 26;
  // Divergence is declared once log(partial) exceeds this with
  // nondecreasing terms over the last block.
  double log_explosion_threshold = 230.0;  // ~ log(1e100)
};

struct LogNormalizerEstimate {
  double log_normalizer = 0.0;  // log(partial); meaningful when status is Finite
  TruncationCertificate certificate;
};

// Throws SpecError unless eps_tail > 0 and InvalidBounds if the supplied tail
// bound increases between sampled truncation points.
LogNormalizerEstimate log_normalizer_truncated(const CountableFamily& family, double eps_tail,
                                               const TruncationOptions& options = {});

struct TruncatedTilt {
  std::vector<double> probs;  // optimizer(n) for n = 0..N, normalized by the partial sum
  double tail_mass = 0.0;     // upper bound on the optimizer's mass beyond N
  TruncationCertificate certificate;
};

// Throws NotFinite when the certificate is not finite.
TruncatedTilt tilt_truncated(const CountableFamily& family, double eps_tail,
                             const TruncationOptions& options = {});

}  // namespace pmitilt
