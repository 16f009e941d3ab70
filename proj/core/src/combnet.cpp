#include "ctc/combnet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "ctc/rng.hpp"

namespace ctc::combnet {

namespace {

constexpr std::size_t kExhaustiveAuditLimit = 64;

std::uint64_t ipow(std::uint64_t base, std::size_t exp) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) out *= base;
  return out;
}

// Solves the receiver's packet equations (one row per received column of
// the generator) and compares the solution with the original messages.
bool decode_audit(const gf::Matrix& generator, const std::vector<gf::Element>& messages,
                  const std::vector<gf::Element>& packets,
                  std::span<const std::size_t> columns) {
  const gf::Matrix equations = generator.columns(columns).transposed();
  std::vector<gf::Element> seen(columns.size());
  for (std::size_t i = 0; i < columns.size(); ++i) seen[i] = packets[columns[i]];
  const gf::Echelon e = gf::reduced_row_echelon(equations.with_appended_column(seen));
  if (e.rank != messages.size()) return false;
  for (std::size_t i = 0; i < messages.size(); ++i) {
    const auto row = e.pivot_row_of_col[i];
    if (!row.has_value() || e.rref(*row, equations.cols()) != messages[i]) return false;
  }
  return true;
}

std::vector<gf::Element> encode(const gf::Matrix& generator,
                                const std::vector<gf::Element>& messages) {
  const gf::PrimeField& f = generator.field();
  std::vector<gf::Element> packets(generator.cols(), 0);
  for (std::size_t j = 0; j < generator.cols(); ++j) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < generator.rows(); ++i)
      acc += std::uint64_t{generator(i, j)} * messages[i];
    packets[j] = static_cast<gf::Element>(acc % f.modulus());
  }
  return packets;
}

std::vector<gf::Element> test_messages(std::size_t count, const gf::PrimeField& f) {
  std::vector<gf::Element> m(count);
  for (std::size_t i = 0; i < count; ++i)
    m[i] = static_cast<gf::Element>((i + 1) % f.modulus());
  return m;
}

}  // namespace

std::uint64_t binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  std::uint64_t out = 1;
  for (std::size_t i = 1; i <= r; ++i) {
    out = out * (n - r + i) / i;
  }
  return out;
}

std::vector<std::size_t> Network::structure_edges(std::size_t s) const {
  if (s >= structures) throw std::invalid_argument("structure index out of range");
  // unrank the s-th m-subset of {0..k-1} in lexicographic order
  std::vector<std::size_t> edges;
  edges.reserve(m);
  std::size_t rank_left = s, next = 0;
  for (std::size_t picked = 0; picked < m; ++picked) {
    for (std::size_t e = next;; ++e) {
      const std::uint64_t with_e = binomial(k - e - 1, m - picked - 1);
      if (rank_left < with_e) {
        edges.push_back(e);
        next = e + 1;
        break;
      }
      rank_left -= with_e;
    }
  }
  return edges;
}

Network build(std::size_t m, std::size_t k, std::size_t u) {
  if (m < 1 || m > k) throw std::invalid_argument("need 1 <= m <= k");
  if (k > 16) throw std::invalid_argument("k limited to 16");
  if (u < 1) throw std::invalid_argument("u must be >= 1");
  Network net;
  net.m = m;
  net.k = k;
  net.u = u;
  net.structures = binomial(k, m);
  const double approx = static_cast<double>(net.structures) *
                        std::pow(static_cast<double>(u), static_cast<double>(m));
  if (approx > 1e6) throw std::invalid_argument("receiver count exceeds 10^6");
  net.tuples = ipow(u, m);
  net.receivers = net.structures * net.tuples;
  return net;
}

RequestAssignment worst_case_requests(const Network& net) {
  RequestAssignment req{net.m, net.u, std::vector<std::size_t>(net.receivers)};
  for (std::size_t r = 0; r < net.receivers; ++r) req.tuple_codes[r] = r % net.tuples;
  return req;
}

std::vector<std::size_t> structure_counts(const Network& net, const RequestAssignment& req,
                                          std::size_t structure) {
  if (req.tuple_codes.size() != net.receivers) {
    throw std::invalid_argument("assignment size does not match receiver count");
  }
  std::vector<std::size_t> counts(net.m * net.u, 0);
  const std::size_t base = structure * net.tuples;
  for (std::size_t t = 0; t < net.tuples; ++t) {
    std::size_t code = req.tuple_codes[base + t];
    for (std::size_t type = 0; type < net.m; ++type) {
      ++counts[type * net.u + code % net.u];
      code /= net.u;
    }
  }
  return counts;
}

std::uint64_t structure_rate_numerator(std::span<const std::size_t> counts, std::size_t m,
                                       std::size_t u) {
  if (counts.size() != m * u) throw std::invalid_argument("counts must be m*u values");
  const std::uint64_t total = ipow(u, m);
  for (std::size_t type = 0; type < m; ++type) {
    std::uint64_t sum = 0;
    for (std::size_t j = 0; j < u; ++j) sum += counts[type * u + j];
    if (sum != total) {
      throw std::invalid_argument("per-type demand counts must sum to u^m");
    }
  }
  std::vector<std::size_t> sorted(counts.begin(), counts.end());
  std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(m),
                    sorted.end(), std::greater<>());
  return std::accumulate(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(m),
                         std::uint64_t{0});
}

double structure_rate(std::span<const std::size_t> counts, std::size_t m, std::size_t u) {
  return static_cast<double>(structure_rate_numerator(counts, m, u)) /
         static_cast<double>(ipow(u, m));
}

MulticastReport multicast_content_rate(const Network& net, const gf::PrimeField& field) {
  const gf::Matrix generator = gf::mds_generator(net.k, net.m, field);
  const auto messages = test_messages(net.m, field);
  const auto packets = encode(generator, messages);
  MulticastReport report;
  report.all_decoded = true;
  for (std::size_t s = 0; s < net.structures; ++s) {
    const auto edges = net.structure_edges(s);
    report.all_decoded = report.all_decoded && decode_audit(generator, messages, packets, edges);
    ++report.structures_checked;
  }
  report.rate = static_cast<double>(net.m);
  return report;
}

WorstCaseReport worst_case_rate(const Network& net, const gf::PrimeField& field,
                                std::uint64_t audit_seed) {
  const std::size_t n_messages = net.m * net.u;
  const std::size_t n_packets = net.k * net.u;
  const gf::Matrix generator = gf::mds_generator(n_packets, n_messages, field);
  const auto messages = test_messages(n_messages, field);
  const auto packets = encode(generator, messages);

  WorstCaseReport report;
  report.rate_num = net.m;
  report.rate_den = net.u;
  report.rate = static_cast<double>(net.m) / static_cast<double>(net.u);
  report.audit_seed = audit_seed;
  report.sampled = net.structures > kExhaustiveAuditLimit;

  std::vector<std::size_t> chosen(net.structures);
  std::iota(chosen.begin(), chosen.end(), 0);
  if (report.sampled) {
    std::mt19937_64 rng(audit_seed);
    for (std::size_t i = 0; i < kExhaustiveAuditLimit; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng() % (chosen.size() - i));
      std::swap(chosen[i], chosen[j]);
    }
    chosen.resize(kExhaustiveAuditLimit);
  }

  report.all_decoded = true;
  std::vector<std::size_t> columns(n_messages);
  for (const std::size_t s : chosen) {
    const auto edges = net.structure_edges(s);
    std::size_t at = 0;
    for (const std::size_t e : edges) {
      for (std::size_t slot = 0; slot < net.u; ++slot) columns[at++] = e * net.u + slot;
    }
    report.all_decoded =
        report.all_decoded && decode_audit(generator, messages, packets, columns);
    ++report.structures_checked;
  }
  return report;
}

AverageRateEstimate estimate_average_rate(const Network& net, std::size_t trials,
                                          std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> trial_numerators(trials, 0);
  std::vector<std::size_t> counts(net.m * net.u);
  for (std::size_t t = 0; t < trials; ++t) {
    std::uint64_t numerator = 0;
    for (std::size_t s = 0; s < net.structures; ++s) {
      std::fill(counts.begin(), counts.end(), 0);
      for (std::size_t r = 0; r < net.tuples; ++r) {
        std::size_t code = static_cast<std::size_t>(rng() % net.tuples);
        for (std::size_t type = 0; type < net.m; ++type) {
          ++counts[type * net.u + code % net.u];
          code /= net.u;
        }
      }
      numerator += structure_rate_numerator(counts, net.m, net.u);
    }
    trial_numerators[t] = numerator;
  }
  const double scale =
      static_cast<double>(net.structures) * static_cast<double>(net.tuples);
  AverageRateEstimate est;
  est.trials = trials;
  est.seed = seed;
  double sum = 0.0;
  for (const auto n : trial_numerators) sum += static_cast<double>(n) / scale;
  est.mean = sum / static_cast<double>(trials);
  double sq = 0.0;
  for (const auto n : trial_numerators) {
    const double d = static_cast<double>(n) / scale - est.mean;
    sq += d * d;
  }
  est.std_error = trials > 1 ? std::sqrt(sq / static_cast<double>(trials - 1) /
                                         static_cast<double>(trials))
                             : 0.0;
  return est;
}

BoundBreakdown average_rate_bound(std::size_t m, std::size_t k, std::size_t u) {
  if (m < 1 || m > k) throw std::invalid_argument("need 1 <= m <= k");
  if (u < 2) throw std::invalid_argument("bound undefined for u < 2");
  BoundBreakdown b;
  b.structures = binomial(k, m);
  const double md = static_cast<double>(m);
  const double ud = static_cast<double>(u);
  const double log_u = std::log(ud);
  const double u_half = std::pow(ud, (md + 1.0) / 2.0);
  b.terms[0] = md / ud;
  b.terms[1] = md / u_half;
  b.terms[2] = md * md * (1.0 + std::sqrt(log_u)) / u_half;
  b.terms[3] = (md + 1.0) * (md + 1.0) * std::sqrt(log_u) /
               (std::sqrt(static_cast<double>(b.structures)) * u_half);
  b.bound = b.terms[0] + b.terms[1] + b.terms[2] + b.terms[3];
  b.delta1 = std::sqrt(1.5 * (md + 3.0) * log_u) / std::pow(ud, (md - 1.0) / 2.0);
  b.p1 = md / u_half;
  b.p2 = 1.0 / u_half;
  b.delta2 = std::sqrt(1.5 * (md + 1.0) * log_u) /
             std::sqrt(static_cast<double>(b.structures) * b.p1);
  return b;
}

GainReport gains(const Network& net, const gf::PrimeField& field, std::size_t trials,
                 std::uint64_t seed) {
  GainReport report;
  report.m = net.m;
  report.k = net.k;
  report.u = net.u;
  report.q = field.modulus();
  report.trials = trials;
  report.seed = seed;

  const MulticastReport mc = multicast_content_rate(net, field);
  const WorstCaseReport wc = worst_case_rate(net, field, substream_seed(seed, 0));
  report.rc = mc.rate;
  report.rw_num = wc.rate_num;
  report.rw_den = wc.rate_den;
  report.gw = net.u;  // (m) / (m/u), exact by construction
  report.audits_ok = mc.all_decoded && wc.all_decoded;
  report.audit_mode = wc.sampled
                          ? "sampled:" + std::to_string(wc.structures_checked) +
                                ":seed=" + std::to_string(wc.audit_seed)
                          : "exhaustive";

  const AverageRateEstimate est = estimate_average_rate(net, trials, seed);
  report.ra_estimate = est.mean;
  report.ra_std_error = est.std_error;
  report.ga_estimate = report.rc / est.mean;
  if (net.u >= 2) {
    report.ra_bound = average_rate_bound(net.m, net.k, net.u).bound;
  }
  return report;
}

}  // namespace ctc::combnet
