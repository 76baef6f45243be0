#include "pmitilt/countable_support.hpp"

#include <cmath>
#include <limits>

#include "pmitilt/errors.hpp"
#include "pmitilt/numeric.hpp"

namespace pmitilt {

using numeric::kInf;
using numeric::kNegInf;

const char* to_string(CertificateStatus status) noexcept {
  switch (status) {
    case CertificateStatus::Finite: return "finite";
    case CertificateStatus::Diverged: return "diverged";
    case CertificateStatus::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

CountableFamily geometric_family(GeometricPrior prior, LinearPayoff payoff) {
  const double q = prior.q;
  if (!(q > 0.0 && q < 1.0)) throw SpecError("geometric prior needs 0 < q < 1");
  if (!std::isfinite(payoff.slope) || !std::isfinite(payoff.intercept)) {
    throw SpecError("payoff coefficients must be finite");
  }
  const double log_q = std::log(q);
  const double log_1mq = std::log1p(-q);
  const double slope = payoff.slope;
  const double intercept = payoff.intercept;
  const double log_ratio = log_q + slope;  // log(q e^slope)

  CountableFamily f;
  f.log_mass = [=](std::uint64_t n) { return log_1mq + static_cast<double>(n) * log_q; };
  f.log_tail_mass = [=](std::uint64_t N) { return static_cast<double>(N + 1) * log_q; };
  f.payoff = [=](std::uint64_t n) { return intercept + slope * static_cast<double>(n); };
  f.payoff_bound = [=](std::uint64_t N) {
    return slope > 0.0 ? kInf : intercept + slope * static_cast<double>(N + 1);
  };
  f.log_tilted_tail = [=](std::uint64_t N) {
    if (!(log_ratio < 0.0)) return kInf;
    return log_1mq + intercept + static_cast<double>(N + 1) * log_ratio - std::log(-std::expm1(log_ratio));
  };
  return f;
}

CountableFamily finite_family(std::vector<double> prior, std::vector<double> payoff) {
  if (prior.empty() || prior.size() != payoff.size()) {
    throw SpecError("finite family needs matching, non-empty prior and payoff vectors");
  }
  numeric::CompensatedSum total;
  for (double p : prior) {
    if (!(p >= 0.0)) throw SpecError("finite family prior has a negative entry");
    total.add(p);
  }
  if (std::abs(total.value() - 1.0) > 1e-12) throw SpecError("finite family prior does not sum to 1");

  const std::uint64_t last = prior.size() - 1;
  // Suffix maxima give an exact sup bound and a tail mass table.
  std::vector<double> tail(prior.size(), 0.0);
  std::vector<double> sup(prior.size(), kNegInf);
  for (std::size_t k = prior.size() - 1; k-- > 0;) {
    tail[k] = tail[k + 1] + prior[k + 1];
    sup[k] = std::max(sup[k + 1], payoff[k + 1]);
  }
  CountableFamily f;
  f.last_index = last;
  f.log_mass = [prior](std::uint64_t n) { return n < prior.size() ? std::log(prior[n]) : kNegInf; };
  f.log_tail_mass = [tail](std::uint64_t N) { return N < tail.size() ? std::log(tail[N]) : kNegInf; };
  f.payoff = [payoff](std::uint64_t n) { return n < payoff.size() ? payoff[n] : 0.0; };
  f.payoff_bound = [sup](std::uint64_t N) { return N < sup.size() ? sup[N] : kNegInf; };
  return f;
}

namespace {

double log_term(const CountableFamily& f, std::uint64_t n) {
  const double lm = f.log_mass(n);
  if (lm == kNegInf) return kNegInf;
  return lm + f.payoff(n);
}

double log_tail_bound(const CountableFamily& f, std::uint64_t N) {
  if (f.log_tilted_tail) return f.log_tilted_tail(N);
  const double lt = f.log_tail_mass(N);
  if (lt == kNegInf) return kNegInf;
  return lt + f.payoff_bound(N);
}

TruncationCertificate make_certificate(std::uint64_t N, double log_partial, double log_tail,
                                       CertificateStatus status) {
  TruncationCertificate c;
  c.N = N;
  c.log_partial = log_partial;
  c.partial = std::exp(log_partial);
  c.tail_bound = std::exp(log_tail);
  c.log_tail_bound = log_tail;
  c.status = status;
  return c;
}

}  // namespace

LogNormalizerEstimate log_normalizer_truncated(const CountableFamily& family, double eps_tail,
                                               const TruncationOptions& options) {
  if (!(eps_tail > 0.0)) throw SpecError("eps_tail must be positive");
  if (!family.log_mass || !family.payoff || !family.log_tail_mass || !family.payoff_bound) {
    throw SpecError("countable family is missing a rule");
  }
  const double log_eps = std::log(eps_tail);

  numeric::LogSumExp partial;
  std::uint64_t next = 0;
  double previous_term = kNegInf;
  double previous_log_tail_mass = kInf;

  const auto sum_through = [&](std::uint64_t N, bool& nondecreasing) {
    nondecreasing = true;
    for (; next <= N; ++next) {
      const double t = log_term(family, next);
      if (t < previous_term) nondecreasing = false;
      previous_term = t;
      partial.add(t);
    }
  };

  if (family.last_index) {
    bool unused = false;
    sum_through(*family.last_index, unused);
    const double lp = partial.value();
    const double lt = log_tail_bound(family, *family.last_index);
    const auto status = (lp != kNegInf && lt < log_eps + lp) ? CertificateStatus::Finite
                                                             : CertificateStatus::Inconclusive;
    return {lp, make_certificate(*family.last_index, lp, lt, status)};
  }

  std::uint64_t N = options.initial_N;
  double lp = kNegInf;
  double lt = kInf;
  for (int doubling = 0; doubling <= options.max_doublings; ++doubling) {
    bool nondecreasing = false;
    sum_through(N, nondecreasing);
    lp = partial.value();

    const double ltm = family.log_tail_mass(N);
    if (ltm > previous_log_tail_mass) {
      throw InvalidBounds("tail bound T(N) increases at N = " + std::to_string(N));
    }
    previous_log_tail_mass = ltm;
    lt = log_tail_bound(family, N);

    if (lp != kNegInf && lt < log_eps + lp) {
      return {lp, make_certificate(N, lp, lt, CertificateStatus::Finite)};
    }
    if (lp > options.log_explosion_threshold && nondecreasing) {
      return {lp, make_certificate(N, lp, lt, CertificateStatus::Diverged)};
    }
    if (N > options.max_terms / 2 || N > std::numeric_limits<std::uint64_t>::max() / 2) break;
    N *= 2;
  }
  return {lp, make_certificate(N, lp, lt, CertificateStatus::Inconclusive)};
}

TruncatedTilt tilt_truncated(const CountableFamily& family, double eps_tail, const TruncationOptions& options) {
  const LogNormalizerEstimate est = log_normalizer_truncated(family, eps_tail, options);
  if (est.certificate.status != CertificateStatus::Finite) {
    throw NotFinite(std::string("log-normalizer certificate is ") + to_string(est.certificate.status));
  }
  TruncatedTilt out;
  out.certificate = est.certificate;
  const std::uint64_t N = est.certificate.N;
  out.probs.resize(N + 1);
  for (std::uint64_t n = 0; n <= N; ++n) {
    const double t = log_term(family, n);
    out.probs[n] = t == kNegInf ? 0.0 : std::exp(t - est.log_normalizer);
  }
  // True tail mass t / (P + t) is increasing in t, so the bound carries over.
  const double lt = est.certificate.log_tail_bound;
  numeric::LogSumExp denom;
  denom.add(est.certificate.log_partial);
  denom.add(lt);
  out.tail_mass = lt == kNegInf ? 0.0 : std::exp(lt - denom.value());
  return out;
}

}  // namespace pmitilt
