#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ctc::broadcast {

/// Per-slot independent erasure probabilities of the two receivers.
struct ChannelParams {
  double eps1;
  double eps2;
  ChannelParams(double e1, double e2);
};

/// k1 type-1 messages, k2 type-2 messages; each receiver wants all of its
/// own type plus any alpha-fraction of the other type. alpha*k1 and
/// alpha*k2 must be integral (no rounding rule exists for the stopping
/// condition, so fractional demands are rejected).
struct Workload {
  std::size_t k1;
  std::size_t k2;
  double alpha;
  std::size_t alpha_k1;
  std::size_t alpha_k2;
  Workload(std::size_t k1, std::size_t k2, double alpha);
};

enum class Strategy { content_type, message_specific };

/// counting: every received phase-2 packet is presumed innovative (exact in
/// the large-field limit). coded: real uniformly random combinations over
/// F_65537 with per-receiver rank tracking and a decode audit.
enum class Mode { counting, coded };

struct TrialResult {
  std::uint64_t slots = 0;         // T
  std::uint64_t phase1_slots = 0;  // T1
  std::uint64_t phase2_slots = 0;  // T2
  std::size_t kprime1 = 0;         // type-1 messages transmitted in phase 1
  std::size_t kprime2 = 0;
  std::size_t q11 = 0;  // |Q_1^1|: type-1 received by receiver 1 in phase 1
  std::size_t q12 = 0;  // |Q_1^2|
  std::size_t q21 = 0;  // |Q_2^1|
  std::size_t q22 = 0;  // |Q_2^2|
  std::size_t kr1 = 0;  // phase-2 demand of receiver 1
  std::size_t kr2 = 0;
  double r1 = 0.0;  // (k1 + alpha*k2) / T
  double r2 = 0.0;  // (k2 + alpha*k1) / T
  bool audit_ok = true;  // coded mode: decode + conservation audit
};

/// One trial of the content-type strategy. Phase 1 sends each head-of-line
/// message until some receiver gets it and stops a type the moment the
/// remaining pool plus the cross receiver's queue equals the cross demand;
/// phase 2 serves the leftovers with linear combinations.
TrialResult simulate_content_type(const ChannelParams& ch, const Workload& w,
                                  std::uint64_t seed, Mode mode);

/// One trial of the message-specific baseline: phase 1 sends each private
/// message until the first acknowledgement from either receiver; the shared
/// subsets and the privates missed by their owners go to phase 2.
TrialResult simulate_message_specific(const ChannelParams& ch, const Workload& w,
                                      std::uint64_t seed, Mode mode);

TrialResult simulate(const ChannelParams& ch, const Workload& w, Strategy strategy,
                     std::uint64_t seed, Mode mode);

struct Aggregate {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double mean_slots = 0.0;
  double se_slots = 0.0;
  double mean_r1 = 0.0;
  double mean_r2 = 0.0;
  double mean_kprime1 = 0.0;
  double mean_kprime2 = 0.0;
  std::vector<TrialResult> per_trial;
};

/// Runs n_trials independent trials; trial t is seeded with
/// substream_seed(seed, t), and slot counts are accumulated as integers
/// before a single final division, so the aggregate does not depend on
/// execution order.
Aggregate run_trials(const ChannelParams& ch, const Workload& w, Strategy strategy,
                     std::size_t n_trials, std::uint64_t seed, Mode mode);

}  // namespace ctc::broadcast
