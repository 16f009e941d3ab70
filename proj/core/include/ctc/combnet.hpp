#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctc/field.hpp"

namespace ctc::combnet {

/// Four-layer combination network: m sources (one message type each, u
/// messages per type), k parallel middle edges, and u^m receivers behind
/// every m-subset of the edges ("basic structure").
struct Network {
  std::size_t m = 0;  // types / sources
  std::size_t k = 0;  // middle-layer edges
  std::size_t u = 0;  // messages per type
  std::size_t structures = 0;  // C(k, m)
  std::size_t tuples = 0;      // u^m request tuples per structure
  std::size_t receivers = 0;   // structures * tuples

  /// Edges of structure s as the s-th m-subset of {0..k-1} in
  /// lexicographic order.
  std::vector<std::size_t> structure_edges(std::size_t s) const;
};

/// Guards: 1 <= m <= k <= 16, u >= 1, receivers <= 10^6.
Network build(std::size_t m, std::size_t k, std::size_t u);

std::uint64_t binomial(std::size_t n, std::size_t r);

/// One request tuple per receiver, encoded in base u: digit i is the
/// requested message index within type i.
struct RequestAssignment {
  std::size_t m = 0, u = 0;
  std::vector<std::size_t> tuple_codes;
};

/// Within every structure the u^m receivers request pairwise distinct
/// tuples (each receiver its own tuple index); all m*u messages are then
/// demanded u^{m-1} times per structure.
RequestAssignment worst_case_requests(const Network& net);

/// Per-(type, message) demand counts inside one structure, row-major m x u.
/// Each type must sum to u^m.
std::vector<std::size_t> structure_counts(const Network& net, const RequestAssignment& req,
                                          std::size_t structure);

/// Top-m popularity rule: the best single-slot schedule serves the m most
/// requested messages, so the structure rate is (sum of the m largest
/// counts) / u^m.
double structure_rate(std::span<const std::size_t> counts, std::size_t m, std::size_t u);
std::uint64_t structure_rate_numerator(std::span<const std::size_t> counts, std::size_t m,
                                       std::size_t u);

struct MulticastReport {
  double rate = 0.0;  // m
  std::size_t structures_checked = 0;
  bool all_decoded = false;
};

/// One message per type multicast to everyone through an MDS code over the
/// k edges; audits that every structure decodes all m symbols. Requires
/// field.modulus() > k.
MulticastReport multicast_content_rate(const Network& net, const gf::PrimeField& field);

struct WorstCaseReport {
  std::size_t rate_num = 0, rate_den = 1;  // m / u
  double rate = 0.0;
  std::size_t structures_checked = 0;
  bool all_decoded = false;
  bool sampled = false;
  std::uint64_t audit_seed = 0;
};

/// Worst-case requests served by coding all m*u messages into k*u packets
/// (u per edge over u slots); the decode audit is exhaustive up to 64
/// structures, otherwise a seeded random sample of 64. Requires
/// field.modulus() > k*u.
WorstCaseReport worst_case_rate(const Network& net, const gf::PrimeField& field,
                                std::uint64_t audit_seed = 0x5EEDu);

struct AverageRateEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo mean of the top-m-rule rate under uniform i.i.d. request
/// tuples, averaged over structures and trials. Numerators accumulate as
/// integers, so the result is independent of evaluation order.
AverageRateEstimate estimate_average_rate(const Network& net, std::size_t trials,
                                          std::uint64_t seed);

struct BoundBreakdown {
  double bound = 0.0;
  std::array<double, 4> terms{};  // bound = terms[0] + ... + terms[3]
  double delta1 = 0.0, delta2 = 0.0;
  double p1 = 0.0, p2 = 0.0;  // abnormal-event probability bounds
  std::uint64_t structures = 0;
};

/// Closed-form upper bound on the average message-specific rate,
///   m/u + m/u^((m+1)/2) + m^2 (1+sqrt(ln u))/u^((m+1)/2)
///       + (m+1)^2 sqrt(ln u) / (sqrt(C(k,m)) u^((m+1)/2)).
/// Requires u >= 2 (the concentration radii need ln u > 0).
BoundBreakdown average_rate_bound(std::size_t m, std::size_t k, std::size_t u);

struct GainReport {
  std::size_t m = 0, k = 0, u = 0;
  std::uint32_t q = 0;
  double rc = 0.0;                        // content-type rate
  std::size_t rw_num = 0, rw_den = 1;     // worst-case message-specific rate
  std::size_t gw = 0;                     // rc / rw, exact (= u)
  double ra_estimate = 0.0, ra_std_error = 0.0;
  std::optional<double> ra_bound;         // absent for u = 1
  double ga_estimate = 0.0;               // rc / ra_estimate
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::string audit_mode;  // "exhaustive" or "sampled:<count>:seed=<seed>"
  bool audits_ok = false;
};

GainReport gains(const Network& net, const gf::PrimeField& field, std::size_t trials,
                 std::uint64_t seed);

}  // namespace ctc::combnet
