#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ctc/field.hpp"

namespace ctc::pliable {

/// A pliable index coding instance: m messages and, for each of n clients,
/// the nonempty set N[j] of messages the client does not have. The
/// complement N_C[j] is the client's side information.
class Instance {
 public:
  /// Validates that every missing set is a nonempty subset of {0..m-1}.
  Instance(std::size_t message_count, std::vector<std::vector<std::size_t>> missing);

  /// One client per nonempty subset of the messages; n = 2^m - 1.
  /// Clients are ordered by subset bitmask (1, 2, ..., 2^m - 1).
  static Instance complete(std::size_t message_count);

  /// Each client misses each message independently with probability
  /// `density`; clients that come out empty are resampled.
  static Instance random(std::size_t message_count, std::size_t client_count,
                         double density, std::mt19937_64& rng);

  std::size_t message_count() const { return m_; }
  std::size_t client_count() const { return missing_.size(); }
  /// N[j], sorted ascending.
  const std::vector<std::size_t>& missing(std::size_t client) const;
  /// N_C[j], sorted ascending.
  std::vector<std::size_t> side_information(std::size_t client) const;
  /// Entry d holds |W_d| = #{j : |N[j]| = d}, for d = 0..m (entry 0 is 0).
  std::vector<std::size_t> degree_class_sizes() const;

  /// Line format: header "pliable m n", then one line per client with the
  /// missing message indices separated by single spaces. Round-trips exactly.
  std::string serialize() const;
  static Instance parse(const std::string& text);

  bool operator==(const Instance&) const = default;

 private:
  std::size_t m_;
  std::vector<std::vector<std::size_t>> missing_;
};

/// K broadcast transmissions of linear message combinations: row k of the
/// coefficient matrix holds the combination sent in slot k (K x m over F_q).
struct CodingPlan {
  gf::Matrix coefficients;
};

/// Satisfaction criterion: some column of the missing-set submatrix is
/// outside the span of the other missing-set columns.
bool client_satisfied(const Instance& inst, const CodingPlan& plan, std::size_t client);

/// Independent oracle: enumerates every assignment of the missing messages
/// and reports whether some coordinate is constant across all assignments
/// consistent with the observations. Budget: |N[j]| <= 12 and
/// q^|N[j]| <= 2^20; throws BudgetError beyond that.
bool brute_force_satisfied(const Instance& inst, const CodingPlan& plan, std::size_t client);

struct DecodeResult {
  std::size_t message;
  gf::Element value;
};

/// Recovers one missing message for a satisfied client from the broadcast
/// observations c = A*b. `side_values` has length m; only the entries the
/// client already holds are read. Throws if the client is not satisfied.
DecodeResult decode_one(const Instance& inst, const CodingPlan& plan, std::size_t client,
                        std::span<const gf::Element> observations,
                        std::span<const gf::Element> side_values);

/// Smallest K such that some K x m matrix over the field satisfies every
/// client, found by exhaustive enumeration with early exit per matrix.
/// Returns std::nullopt when no K <= max_length works. Throws BudgetError
/// when q^(K*m) would exceed 2^26 for some K tried.
std::optional<std::size_t> min_code_length(const Instance& inst,
                                           const gf::PrimeField& field,
                                           std::size_t max_length);

/// Appends uniformly random rows until every client is satisfied or
/// max_rounds rows were drawn; then falls back to identity rows, which
/// always complete the plan. The returned plan satisfies all clients.
CodingPlan greedy_encode(const Instance& inst, const gf::PrimeField& field,
                         std::mt19937_64& rng, std::size_t max_rounds);

}  // namespace ctc::pliable
