#include "ctc/pliable.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ctc/errors.hpp"
#include "ctc/rng.hpp"

namespace ctc::pliable {

namespace {

constexpr std::uint64_t kOracleBudget = 1ull << 20;
constexpr double kSearchBudgetLog2 = 26.0;

gf::Matrix missing_submatrix(const gf::Matrix& a, const std::vector<std::size_t>& n) {
  return a.columns(std::span<const std::size_t>(n.data(), n.size()));
}

}  // namespace

Instance::Instance(std::size_t message_count, std::vector<std::vector<std::size_t>> missing)
    : m_(message_count), missing_(std::move(missing)) {
  if (m_ == 0) throw std::invalid_argument("instance needs at least one message");
  for (auto& n : missing_) {
    if (n.empty()) {
      throw std::invalid_argument("client with empty missing set cannot be satisfied");
    }
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
    if (n.back() >= m_) throw std::invalid_argument("missing message index out of range");
  }
}

Instance Instance::complete(std::size_t message_count) {
  if (message_count == 0) throw std::invalid_argument("complete instance needs m >= 1");
  if (message_count > 20) throw std::invalid_argument("complete instance limited to m <= 20");
  std::vector<std::vector<std::size_t>> missing;
  const std::size_t n = (std::size_t{1} << message_count) - 1;
  missing.reserve(n);
  for (std::size_t mask = 1; mask <= n; ++mask) {
    std::vector<std::size_t> set;
    for (std::size_t i = 0; i < message_count; ++i) {
      if (mask & (std::size_t{1} << i)) set.push_back(i);
    }
    missing.push_back(std::move(set));
  }
  return Instance(message_count, std::move(missing));
}

Instance Instance::random(std::size_t message_count, std::size_t client_count,
                          double density, std::mt19937_64& rng) {
  if (!(density > 0.0) || density > 1.0) {
    throw std::invalid_argument("density must be in (0, 1]");
  }
  std::vector<std::vector<std::size_t>> missing(client_count);
  for (auto& set : missing) {
    do {
      set.clear();
      for (std::size_t i = 0; i < message_count; ++i) {
        if (uniform01(rng) < density) set.push_back(i);
      }
    } while (set.empty());
  }
  return Instance(message_count, std::move(missing));
}

const std::vector<std::size_t>& Instance::missing(std::size_t client) const {
  if (client >= missing_.size()) throw std::invalid_argument("client index out of range");
  return missing_[client];
}

std::vector<std::size_t> Instance::side_information(std::size_t client) const {
  const auto& n = missing(client);
  std::vector<std::size_t> side;
  side.reserve(m_ - n.size());
  std::size_t at = 0;
  for (std::size_t i = 0; i < m_; ++i) {
    if (at < n.size() && n[at] == i) {
      ++at;
    } else {
      side.push_back(i);
    }
  }
  return side;
}

std::vector<std::size_t> Instance::degree_class_sizes() const {
  std::vector<std::size_t> sizes(m_ + 1, 0);
  for (const auto& n : missing_) ++sizes[n.size()];
  return sizes;
}

std::string Instance::serialize() const {
  std::ostringstream out;
  out << "pliable " << m_ << ' ' << missing_.size() << '\n';
  for (const auto& n : missing_) {
    for (std::size_t i = 0; i < n.size(); ++i) {
      if (i) out << ' ';
      out << n[i];
    }
    out << '\n';
  }
  return out.str();
}

Instance Instance::parse(const std::string& text) {
  std::istringstream in(text);
  std::string tag;
  std::size_t m = 0, n = 0;
  if (!(in >> tag >> m >> n) || tag != "pliable") {
    throw std::invalid_argument("bad instance header, expected 'pliable m n'");
  }
  std::string line;
  std::getline(in, line);  // rest of header line
  std::vector<std::vector<std::size_t>> missing;
  missing.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::getline(in, line)) throw std::invalid_argument("truncated instance body");
    std::istringstream row(line);
    std::vector<std::size_t> set;
    std::size_t idx;
    while (row >> idx) set.push_back(idx);
    missing.push_back(std::move(set));
  }
  return Instance(m, std::move(missing));
}

bool client_satisfied(const Instance& inst, const CodingPlan& plan, std::size_t client) {
  if (plan.coefficients.cols() != inst.message_count()) {
    throw std::invalid_argument("coding matrix width does not match message count");
  }
  const auto& n = inst.missing(client);
  const gf::Matrix sub = missing_submatrix(plan.coefficients, n);
  const std::size_t full = gf::rank(sub);
  if (full == 0) return false;
  if (full == n.size()) return true;  // every column independent of the rest
  for (std::size_t drop = 0; drop < n.size(); ++drop) {
    std::vector<std::size_t> keep;
    keep.reserve(n.size() - 1);
    for (std::size_t i = 0; i < n.size(); ++i) {
      if (i != drop) keep.push_back(i);
    }
    if (gf::rank(sub.columns(keep)) < full) return true;
  }
  return false;
}

bool brute_force_satisfied(const Instance& inst, const CodingPlan& plan, std::size_t client) {
  if (plan.coefficients.cols() != inst.message_count()) {
    throw std::invalid_argument("coding matrix width does not match message count");
  }
  const auto& n = inst.missing(client);
  const gf::PrimeField& f = plan.coefficients.field();
  const std::uint64_t q = f.modulus();
  if (n.size() > 12 ||
      std::pow(static_cast<double>(q), static_cast<double>(n.size())) >
          static_cast<double>(kOracleBudget)) {
    throw BudgetError("instance too large for oracle: q^" + std::to_string(n.size()) +
                      " exceeds 2^20");
  }
  const gf::Matrix sub = missing_submatrix(plan.coefficients, n);
  // Truth assignment zero: observations are zero, so the consistent set is
  // every x with sub*x = 0. The answer is assignment independent because the
  // solution set of any consistent system is a coset of that nullspace.
  std::vector<gf::Element> x(n.size(), 0);
  std::vector<bool> coordinate_pinned(n.size(), true);
  bool done = false;
  while (!done) {
    const auto y = sub.mul_vec(x);
    if (std::all_of(y.begin(), y.end(), [](gf::Element v) { return v == 0; })) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] != 0) coordinate_pinned[i] = false;  // differs from the zero solution
      }
    }
    // odometer step over F_q^{|N|}
    done = true;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (++x[i] < q) {
        done = false;
        break;
      }
      x[i] = 0;
    }
  }
  return std::any_of(coordinate_pinned.begin(), coordinate_pinned.end(),
                     [](bool pinned) { return pinned; });
}

DecodeResult decode_one(const Instance& inst, const CodingPlan& plan, std::size_t client,
                        std::span<const gf::Element> observations,
                        std::span<const gf::Element> side_values) {
  const gf::Matrix& a = plan.coefficients;
  if (observations.size() != a.rows()) {
    throw std::invalid_argument("observation count does not match transmissions");
  }
  if (side_values.size() != inst.message_count()) {
    throw std::invalid_argument("side_values must have one slot per message");
  }
  const gf::PrimeField& f = a.field();
  // Remove the side-information contribution from every observation.
  std::vector<gf::Element> reduced(observations.begin(), observations.end());
  for (std::size_t col : inst.side_information(client)) {
    for (std::size_t r = 0; r < a.rows(); ++r) {
      reduced[r] = f.sub(reduced[r], f.mul(a(r, col), side_values[col]));
    }
  }
  const auto& n = inst.missing(client);
  const gf::Matrix sub = missing_submatrix(a, n);
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (auto value = gf::unique_coordinate_solve(sub, reduced, i)) {
      return {n[i], *value};
    }
  }
  throw std::invalid_argument("decode_one called on an unsatisfied client");
}

std::optional<std::size_t> min_code_length(const Instance& inst,
                                           const gf::PrimeField& field,
                                           std::size_t max_length) {
  const std::uint64_t q = field.modulus();
  const std::size_t m = inst.message_count();
  const std::size_t n_clients = inst.client_count();
  for (std::size_t length = 1; length <= max_length; ++length) {
    const double log2_count =
        static_cast<double>(length * m) * std::log2(static_cast<double>(q));
    if (log2_count > kSearchBudgetLog2) {
      throw BudgetError("min_code_length budget exceeded at K=" + std::to_string(length) +
                        ": q^(K*m) > 2^26");
    }
    gf::Matrix a(field, length, m);
    std::vector<gf::Element> cells(length * m, 0);
    bool exhausted = false;
    while (!exhausted) {
      for (std::size_t r = 0; r < length; ++r)
        for (std::size_t c = 0; c < m; ++c) a(r, c) = cells[r * m + c];
      CodingPlan plan{a};
      bool all_ok = true;
      for (std::size_t j = 0; j < n_clients; ++j) {
        if (!client_satisfied(inst, plan, j)) {
          all_ok = false;
          break;
        }
      }
      if (all_ok) return length;
      exhausted = true;
      for (auto& cell : cells) {
        if (++cell < q) {
          exhausted = false;
          break;
        }
        cell = 0;
      }
    }
  }
  return std::nullopt;
}

CodingPlan greedy_encode(const Instance& inst, const gf::PrimeField& field,
                         std::mt19937_64& rng, std::size_t max_rounds) {
  const std::size_t m = inst.message_count();
  CodingPlan plan{gf::Matrix(field, 0, m)};
  auto all_satisfied = [&] {
    for (std::size_t j = 0; j < inst.client_count(); ++j) {
      if (!client_satisfied(inst, plan, j)) return false;
    }
    return true;
  };
  std::vector<gf::Element> row(m);
  for (std::size_t round = 0; round < max_rounds; ++round) {
    if (all_satisfied()) return plan;
    for (auto& cell : row) cell = static_cast<gf::Element>(rng() % field.modulus());
    plan.coefficients.append_row(row);
  }
  // Deterministic completion: uncoded rows always satisfy everyone.
  for (std::size_t i = 0; i < m && !all_satisfied(); ++i) {
    std::fill(row.begin(), row.end(), 0);
    row[i] = 1;
    plan.coefficients.append_row(row);
  }
  return plan;
}

}  // namespace ctc::pliable
