#include "ctc/broadcast.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "ctc/field.hpp"
#include "ctc/rng.hpp"

namespace ctc::broadcast {

namespace {

constexpr std::uint32_t kCodedModulus = 65537;
constexpr std::size_t kNoIndex = static_cast<std::size_t>(-1);

enum : std::uint8_t { kGot1 = 1, kGot2 = 2 };

struct Channel {
  double eps1, eps2;
  std::mt19937_64 rng;

  // Both receivers are always drawn, one slot at a time, so counting and
  // coded mode consume an identical erasure stream for the same seed.
  std::uint8_t slot() {
    const double u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return static_cast<std::uint8_t>((u1 >= eps1 ? kGot1 : 0u) |
                                     (u2 >= eps2 ? kGot2 : 0u));
  }
};

struct Phase1Type {
  std::size_t transmitted = 0;
  std::size_t only1 = 0, only2 = 0, both = 0;
  std::uint64_t slots = 0;
};

// Sends pool messages head-of-line, each until the first acknowledgement.
// Stops once (pool remaining) + (cross receiver's queue) equals the cross
// demand; that quantity starts at k and drops by one exactly when the cross
// receiver misses a completed message, so with cross_demand = 0 the pool
// always runs to exhaustion.
Phase1Type phase1_pool(Channel& ch, std::size_t k, std::size_t cross_demand,
                       std::uint8_t cross_flag) {
  Phase1Type out;
  std::size_t pool_plus_cross_queue = k;
  while (out.transmitted < k && pool_plus_cross_queue > cross_demand) {
    std::uint8_t got = 0;
    do {
      ++out.slots;
      got = ch.slot();
    } while (got == 0);
    if (got == kGot1) ++out.only1;
    else if (got == kGot2) ++out.only2;
    else ++out.both;
    if (!(got & cross_flag)) --pool_plus_cross_queue;
    ++out.transmitted;
  }
  return out;
}

std::uint64_t phase2_counting(Channel& ch, std::size_t d1, std::size_t d2) {
  std::uint64_t slots = 0;
  while (d1 > 0 || d2 > 0) {
    ++slots;
    const auto got = ch.slot();
    if ((got & kGot1) && d1 > 0) --d1;
    if ((got & kGot2) && d2 > 0) --d2;
  }
  return slots;
}

// Incremental reduced echelon form over one receiver's unknown coordinates.
// Known pool entries are folded into the right-hand side on absorption.
class RankDecoder {
 public:
  RankDecoder(const gf::PrimeField& field, std::vector<std::size_t> unknown_of_pool,
              std::size_t unknown_count, const std::vector<gf::Element>& pool_values)
      : f_(field),
        unknown_of_pool_(std::move(unknown_of_pool)),
        values_(pool_values),
        d_(unknown_count),
        pivot_of_col_(unknown_count, kNoIndex) {}

  std::size_t rank() const { return rows_.size(); }
  std::size_t unknowns() const { return d_; }

  bool absorb(const std::vector<gf::Element>& pool_coeffs, gf::Element rhs) {
    std::vector<gf::Element> w(d_ + 1, 0);
    for (std::size_t p = 0; p < pool_coeffs.size(); ++p) {
      const std::size_t u = unknown_of_pool_[p];
      if (u == kNoIndex) {
        rhs = f_.sub(rhs, f_.mul(pool_coeffs[p], values_[p]));
      } else {
        w[u] = pool_coeffs[p];
      }
    }
    w[d_] = rhs;
    // Reduce against every existing pivot before choosing a new one; stored
    // rows have zeros at all other pivot columns, so one ascending pass is
    // enough and cannot reintroduce a nonzero at a pivot column.
    for (std::size_t c = 0; c < d_; ++c) {
      if (w[c] == 0 || pivot_of_col_[c] == kNoIndex) continue;
      const gf::Element factor = w[c];
      const auto& pivot_row = rows_[pivot_of_col_[c]];
      for (std::size_t cc = c; cc <= d_; ++cc)
        w[cc] = f_.sub(w[cc], f_.mul(factor, pivot_row[cc]));
    }
    std::size_t lead = kNoIndex;
    for (std::size_t c = 0; c < d_; ++c) {
      if (w[c] != 0) {
        lead = c;
        break;
      }
    }
    if (lead == kNoIndex) return false;
    const gf::Element scale = f_.inv(w[lead]);
    for (std::size_t cc = lead; cc <= d_; ++cc) w[cc] = f_.mul(w[cc], scale);
    for (auto& row : rows_) {
      const gf::Element factor = row[lead];
      if (factor == 0) continue;
      for (std::size_t cc = lead; cc <= d_; ++cc)
        row[cc] = f_.sub(row[cc], f_.mul(factor, w[cc]));
    }
    pivot_of_col_[lead] = rows_.size();
    rows_.push_back(std::move(w));
    return true;
  }

  // Valid once rank() == unknowns(): the reduced rows are unit vectors.
  std::vector<gf::Element> solution() const {
    std::vector<gf::Element> x(d_);
    for (std::size_t c = 0; c < d_; ++c) x[c] = rows_[pivot_of_col_[c]][d_];
    return x;
  }

  bool solution_matches_truth() const {
    const auto x = solution();
    for (std::size_t p = 0; p < unknown_of_pool_.size(); ++p) {
      const std::size_t u = unknown_of_pool_[p];
      if (u != kNoIndex && x[u] != values_[p]) return false;
    }
    return true;
  }

 private:
  const gf::PrimeField& f_;
  std::vector<std::size_t> unknown_of_pool_;
  const std::vector<gf::Element>& values_;
  std::size_t d_;
  std::vector<std::vector<gf::Element>> rows_;
  std::vector<std::size_t> pivot_of_col_;
};

struct CodedOutcome {
  std::uint64_t slots = 0;
  bool audit_ok = true;
};

// Phase-2 pool layout shared by both strategies:
//   [0, n_shared)                      unknown to both receivers
//   [n_shared, n_shared + n_only1)     unknown to receiver 1, held by receiver 2
//   [n_shared + n_only1, n_pool)       unknown to receiver 2, held by receiver 1
CodedOutcome phase2_coded(Channel& ch, std::mt19937_64& code_rng,
                          std::mt19937_64& value_rng, std::size_t n_shared,
                          std::size_t n_only1, std::size_t n_only2) {
  const gf::PrimeField field(kCodedModulus);
  const std::size_t n_pool = n_shared + n_only1 + n_only2;
  const std::size_t d1 = n_shared + n_only1;
  const std::size_t d2 = n_shared + n_only2;

  std::vector<gf::Element> values(n_pool);
  for (auto& v : values) v = static_cast<gf::Element>(value_rng() % kCodedModulus);

  std::vector<std::size_t> unknown1(n_pool, kNoIndex), unknown2(n_pool, kNoIndex);
  for (std::size_t p = 0; p < d1; ++p) unknown1[p] = p;
  for (std::size_t p = 0; p < n_shared; ++p) unknown2[p] = p;
  for (std::size_t p = 0; p < n_only2; ++p) unknown2[d1 + p] = n_shared + p;

  RankDecoder dec1(field, std::move(unknown1), d1, values);
  RankDecoder dec2(field, std::move(unknown2), d2, values);

  CodedOutcome out;
  std::vector<gf::Element> coeffs(n_pool);
  while (dec1.rank() < d1 || dec2.rank() < d2) {
    ++out.slots;
    std::uint64_t acc = 0;
    for (std::size_t p = 0; p < n_pool; ++p) {
      coeffs[p] = static_cast<gf::Element>(code_rng() % kCodedModulus);
      acc += std::uint64_t{coeffs[p]} * values[p];
      if (acc >= (std::uint64_t{1} << 62)) acc %= kCodedModulus;
    }
    const auto rhs = static_cast<gf::Element>(acc % kCodedModulus);
    const auto got = ch.slot();
    if ((got & kGot1) && dec1.rank() < d1) dec1.absorb(coeffs, rhs);
    if ((got & kGot2) && dec2.rank() < d2) dec2.absorb(coeffs, rhs);
  }
  out.audit_ok = (d1 == 0 || dec1.solution_matches_truth()) &&
                 (d2 == 0 || dec2.solution_matches_truth());
  return out;
}

struct PhaseStreams {
  Channel channel;
  std::mt19937_64 code_rng;
  std::mt19937_64 value_rng;
};

PhaseStreams make_streams(const ChannelParams& ch, std::uint64_t seed) {
  return PhaseStreams{
      Channel{ch.eps1, ch.eps2, std::mt19937_64(substream_seed(seed, 1))},
      std::mt19937_64(substream_seed(seed, 2)),
      std::mt19937_64(substream_seed(seed, 3)),
  };
}

void finalize(TrialResult& res, const Workload& w) {
  res.slots = res.phase1_slots + res.phase2_slots;
  res.r1 = static_cast<double>(w.k1 + w.alpha_k2) / static_cast<double>(res.slots);
  res.r2 = static_cast<double>(w.k2 + w.alpha_k1) / static_cast<double>(res.slots);
}

}  // namespace

ChannelParams::ChannelParams(double e1, double e2) : eps1(e1), eps2(e2) {
  if (!(eps1 >= 0.0 && eps1 < 1.0) || !(eps2 >= 0.0 && eps2 < 1.0)) {
    throw std::invalid_argument("erasure probabilities must lie in [0, 1)");
  }
}

Workload::Workload(std::size_t k1_in, std::size_t k2_in, double alpha_in)
    : k1(k1_in), k2(k2_in), alpha(alpha_in) {
  if (k1 == 0 || k2 == 0) throw std::invalid_argument("k1 and k2 must be >= 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha out of range [0, 1]");
  const auto integral_demand = [this](std::size_t k) {
    const double x = alpha * static_cast<double>(k);
    const double r = std::round(x);
    if (std::abs(x - r) > 1e-6) {
      throw std::invalid_argument("alpha*k must be an integer, got " + std::to_string(x));
    }
    return static_cast<std::size_t>(r);
  };
  alpha_k1 = integral_demand(k1);
  alpha_k2 = integral_demand(k2);
}

TrialResult simulate_content_type(const ChannelParams& ch, const Workload& w,
                                  std::uint64_t seed, Mode mode) {
  auto s = make_streams(ch, seed);
  const Phase1Type t1 = phase1_pool(s.channel, w.k1, w.alpha_k1, kGot2);
  const Phase1Type t2 = phase1_pool(s.channel, w.k2, w.alpha_k2, kGot1);

  TrialResult res;
  res.kprime1 = t1.transmitted;
  res.kprime2 = t2.transmitted;
  res.q11 = t1.only1 + t1.both;
  res.q12 = t1.only2 + t1.both;
  res.q21 = t2.only1 + t2.both;
  res.q22 = t2.only2 + t2.both;
  res.phase1_slots = t1.slots + t2.slots;

  const std::size_t rem1 = w.k1 - t1.transmitted;
  const std::size_t rem2 = w.k2 - t2.transmitted;
  if (rem1 + res.q12 < w.alpha_k1 || (rem1 > 0 && rem1 + res.q12 != w.alpha_k1) ||
      rem2 + res.q21 < w.alpha_k2 || (rem2 > 0 && rem2 + res.q21 != w.alpha_k2)) {
    throw std::logic_error("phase-1 stopping invariant violated");
  }
  res.kr1 = rem1 + t1.only2 + rem2;
  res.kr2 = rem2 + t2.only1 + rem1;
  if (mode == Mode::counting) {
    res.phase2_slots = phase2_counting(s.channel, res.kr1, res.kr2);
  } else {
    const auto coded = phase2_coded(s.channel, s.code_rng, s.value_rng, rem1 + rem2,
                                    t1.only2, t2.only1);
    res.phase2_slots = coded.slots;
    res.audit_ok = coded.audit_ok;
  }
  finalize(res, w);
  return res;
}

TrialResult simulate_message_specific(const ChannelParams& ch, const Workload& w,
                                      std::uint64_t seed, Mode mode) {
  auto s = make_streams(ch, seed);
  const std::size_t private1 = w.k1 - w.alpha_k1;
  const std::size_t private2 = w.k2 - w.alpha_k2;
  const Phase1Type t1 = phase1_pool(s.channel, private1, 0, kGot2);
  const Phase1Type t2 = phase1_pool(s.channel, private2, 0, kGot1);

  TrialResult res;
  res.kprime1 = t1.transmitted;
  res.kprime2 = t2.transmitted;
  res.q11 = t1.only1 + t1.both;
  res.q12 = t1.only2 + t1.both;
  res.q21 = t2.only1 + t2.both;
  res.q22 = t2.only2 + t2.both;
  res.phase1_slots = t1.slots + t2.slots;

  // Privates missed by their owner were received by the other side, so they
  // re-enter phase 2 with the shared subsets of both types.
  const std::size_t shared = w.alpha_k1 + w.alpha_k2;
  res.kr1 = shared + t1.only2;
  res.kr2 = shared + t2.only1;
  if (mode == Mode::counting) {
    res.phase2_slots = phase2_counting(s.channel, res.kr1, res.kr2);
  } else {
    const auto coded =
        phase2_coded(s.channel, s.code_rng, s.value_rng, shared, t1.only2, t2.only1);
    res.phase2_slots = coded.slots;
    res.audit_ok = coded.audit_ok;
  }
  finalize(res, w);
  return res;
}

TrialResult simulate(const ChannelParams& ch, const Workload& w, Strategy strategy,
                     std::uint64_t seed, Mode mode) {
  return strategy == Strategy::content_type ? simulate_content_type(ch, w, seed, mode)
                                            : simulate_message_specific(ch, w, seed, mode);
}

Aggregate run_trials(const ChannelParams& ch, const Workload& w, Strategy strategy,
                     std::size_t n_trials, std::uint64_t seed, Mode mode) {
  if (n_trials == 0) throw std::invalid_argument("n_trials must be >= 1");
  Aggregate agg;
  agg.trials = n_trials;
  agg.seed = seed;
  agg.per_trial.reserve(n_trials);
  for (std::size_t t = 0; t < n_trials; ++t) {
    agg.per_trial.push_back(simulate(ch, w, strategy, substream_seed(seed, t), mode));
  }
  std::uint64_t sum_slots = 0, sum_kprime1 = 0, sum_kprime2 = 0;
  for (const auto& tr : agg.per_trial) {
    sum_slots += tr.slots;
    sum_kprime1 += tr.kprime1;
    sum_kprime2 += tr.kprime2;
  }
  const double n = static_cast<double>(n_trials);
  agg.mean_slots = static_cast<double>(sum_slots) / n;
  agg.mean_kprime1 = static_cast<double>(sum_kprime1) / n;
  agg.mean_kprime2 = static_cast<double>(sum_kprime2) / n;
  double sum_r1 = 0.0, sum_r2 = 0.0, sq = 0.0;
  for (const auto& tr : agg.per_trial) {
    sum_r1 += tr.r1;
    sum_r2 += tr.r2;
    const double d = static_cast<double>(tr.slots) - agg.mean_slots;
    sq += d * d;
  }
  agg.mean_r1 = sum_r1 / n;
  agg.mean_r2 = sum_r2 / n;
  agg.se_slots = n_trials > 1 ? std::sqrt(sq / (n - 1.0) / n) : 0.0;
  return agg;
}

}  // namespace ctc::broadcast
