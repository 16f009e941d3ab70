// ctc: command line front end for the content-type coding library.
// Exit codes: 0 success, 2 argument or domain error, 3 search budget exceeded.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ctc/broadcast.hpp"
#include "ctc/combnet.hpp"
#include "ctc/errors.hpp"
#include "ctc/field.hpp"
#include "ctc/pliable.hpp"
#include "ctc/regions.hpp"
#include "ctc/rng.hpp"
#include "json.hpp"

namespace {

using nlohmann::ordered_json;

constexpr std::uint64_t kDefaultSeed = 12345;  // fixed so bare runs reproduce
constexpr const char* kSchemaTag = "ctc/1";

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file: " + out_path);
  f << text;
}

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha out of range [0, 1]");
  }
}

std::uint32_t next_prime_above(std::uint32_t n) {
  for (std::uint32_t c = n + 1;; ++c) {
    bool prime = c >= 2;
    for (std::uint32_t d = 2; d * d <= c; ++d) {
      if (c % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime) return c;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream out;
  out << f.rdbuf();
  return out.str();
}

// Text format "matrix K m q" followed by K rows of m entries.
ctc::pliable::CodingPlan read_matrix(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string tag;
  std::size_t rows = 0, cols = 0;
  std::uint32_t q = 0;
  if (!(in >> tag >> rows >> cols >> q) || tag != "matrix") {
    throw std::invalid_argument("bad matrix header, expected 'matrix K m q'");
  }
  const ctc::gf::PrimeField field(q);
  ctc::gf::Matrix a(field, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      std::uint64_t value;
      if (!(in >> value)) throw std::invalid_argument("truncated matrix body");
      a(r, c) = static_cast<ctc::gf::Element>(value % q);
    }
  }
  return ctc::pliable::CodingPlan{a};
}

struct RegionsOptions {
  double eps1 = 0.0, eps2 = 0.0, alpha = 0.0;
  std::size_t rays = 64;
  std::string out;
};

void run_regions(const RegionsOptions& opt) {
  check_alpha(opt.alpha);
  const auto ch = ctc::regions::derive_channel(opt.eps1, opt.eps2);
  const auto info = ctc::regions::classify_case(ch, opt.alpha);
  char header[160];
  std::snprintf(header, sizeof(header),
                "# phi1=%.12f phi2=%.12f case=Case%d corner_achievable=%s\n", ch.phi1,
                ch.phi2, static_cast<int>(info.c),
                info.corner_achievable ? "true" : "false");
  std::string text = header;
  text += ctc::regions::boundary_csv_header();
  text += '\n';
  for (const auto kind :
       {ctc::regions::RegionKind::content, ctc::regions::RegionKind::message}) {
    const auto pts = ctc::regions::boundary_trace(ch, opt.alpha, kind, opt.rays);
    text += ctc::regions::boundary_csv_rows(ch, opt.alpha, kind, pts);
  }
  emit(text, opt.out);
}

struct BroadcastOptions {
  std::string strategy = "content";
  double eps1 = 0.0, eps2 = 0.0, alpha = 0.0;
  std::size_t k1 = 0, k2 = 0, trials = 1;
  std::uint64_t seed = kDefaultSeed;
  std::string mode = "counting";
  bool per_trial = false;
  std::string out;
};

// Large-k slot expectations; for the message-specific baseline the phase-1
// pool is the private messages and both shared subsets go to phase 2.
ctc::regions::ExpectedPlan message_expected(const ctc::regions::DerivedChannel& ch,
                                            const ctc::broadcast::Workload& w) {
  ctc::regions::ExpectedPlan plan{};
  const double k1 = static_cast<double>(w.k1), k2 = static_cast<double>(w.k2);
  const double a = w.alpha;
  plan.kprime1 = (1.0 - a) * k1;
  plan.kprime2 = (1.0 - a) * k2;
  plan.m11 = plan.kprime1 * ch.phi1;
  plan.m12 = plan.kprime1 * ch.phi2;
  plan.m21 = plan.kprime2 * ch.phi1;
  plan.m22 = plan.kprime2 * ch.phi2;
  plan.phase1_slots = (plan.kprime1 + plan.kprime2) / (1.0 - ch.eps12);
  plan.kr1 = a * (k1 + k2) + plan.kprime1 * (1.0 - ch.phi1);
  plan.kr2 = a * (k1 + k2) + plan.kprime2 * (1.0 - ch.phi2);
  plan.phase2_slots = std::max(plan.kr1 / (1.0 - ch.eps1), plan.kr2 / (1.0 - ch.eps2));
  plan.total_slots = plan.phase1_slots + plan.phase2_slots;
  plan.r1 = (k1 + a * k2) / plan.total_slots;
  plan.r2 = (k2 + a * k1) / plan.total_slots;
  return plan;
}

void run_broadcast(const BroadcastOptions& opt) {
  check_alpha(opt.alpha);
  const ctc::broadcast::ChannelParams ch(opt.eps1, opt.eps2);
  const ctc::broadcast::Workload w(opt.k1, opt.k2, opt.alpha);
  const auto strategy = opt.strategy == "content"
                            ? ctc::broadcast::Strategy::content_type
                            : ctc::broadcast::Strategy::message_specific;
  const auto mode = opt.mode == "counting" ? ctc::broadcast::Mode::counting
                                           : ctc::broadcast::Mode::coded;
  const auto agg =
      ctc::broadcast::run_trials(ch, w, strategy, opt.trials, opt.seed, mode);

  const auto derived = ctc::regions::derive_channel(opt.eps1, opt.eps2);
  const auto predicted = strategy == ctc::broadcast::Strategy::content_type
                             ? ctc::regions::expected_quantities(derived, w)
                             : message_expected(derived, w);

  ordered_json doc;
  doc["schema"] = kSchemaTag;
  doc["strategy"] = opt.strategy;
  doc["eps1"] = opt.eps1;
  doc["eps2"] = opt.eps2;
  doc["alpha"] = opt.alpha;
  doc["k1"] = opt.k1;
  doc["k2"] = opt.k2;
  doc["trials"] = opt.trials;
  doc["seed"] = opt.seed;
  doc["mode"] = opt.mode;
  doc["mean_T"] = agg.mean_slots;
  doc["mean_r1"] = agg.mean_r1;
  doc["mean_r2"] = agg.mean_r2;
  doc["se_T"] = agg.se_slots;
  doc["predicted"] = {
      {"kprime1", predicted.kprime1}, {"kprime2", predicted.kprime2},
      {"kr1", predicted.kr1},         {"kr2", predicted.kr2},
      {"N1", predicted.phase1_slots}, {"N2", predicted.phase2_slots},
      {"T", predicted.total_slots},   {"r1", predicted.r1},
      {"r2", predicted.r2},
  };
  doc["gap_T"] = std::abs(agg.mean_slots - predicted.total_slots) / predicted.total_slots;
  if (opt.per_trial) {
    ordered_json arr = ordered_json::array();
    for (const auto& tr : agg.per_trial) {
      arr.push_back({{"T", tr.slots},
                     {"T1", tr.phase1_slots},
                     {"T2", tr.phase2_slots},
                     {"kprime1", tr.kprime1},
                     {"kprime2", tr.kprime2},
                     {"q11", tr.q11},
                     {"q12", tr.q12},
                     {"q21", tr.q21},
                     {"q22", tr.q22},
                     {"kr1", tr.kr1},
                     {"kr2", tr.kr2},
                     {"r1", tr.r1},
                     {"r2", tr.r2},
                     {"audit_ok", tr.audit_ok}});
    }
    doc["per_trial"] = std::move(arr);
  }
  emit(doc.dump(2) + "\n", opt.out);
}

struct PliableCompleteOptions {
  std::size_t m = 0;
  std::uint32_t q = 2;
  bool min_k = false;
  std::size_t kmax = 8;
  std::string instance_out;
  std::string out;
};

void run_pliable_complete(const PliableCompleteOptions& opt) {
  const auto inst = ctc::pliable::Instance::complete(opt.m);
  const ctc::gf::PrimeField field(opt.q);
  ordered_json doc;
  doc["schema"] = kSchemaTag;
  doc["m"] = inst.message_count();
  doc["n"] = inst.client_count();
  doc["q"] = opt.q;
  doc["degree_classes"] = inst.degree_class_sizes();
  if (opt.min_k) {
    const auto min_len = ctc::pliable::min_code_length(inst, field, opt.kmax);
    doc["kmax"] = opt.kmax;
    if (min_len.has_value()) {
      doc["min_K"] = *min_len;
    } else {
      doc["min_K"] = nullptr;
    }
  }
  if (!opt.instance_out.empty()) emit(inst.serialize(), opt.instance_out);
  emit(doc.dump(2) + "\n", opt.out);
}

struct PliableCheckOptions {
  std::string instance_path;
  std::string matrix_path;
  std::string out;
};

void run_pliable_check(const PliableCheckOptions& opt) {
  const auto inst = ctc::pliable::Instance::parse(read_file(opt.instance_path));
  const auto plan = read_matrix(opt.matrix_path);
  ordered_json clients = ordered_json::array();
  bool agreement = true, all_satisfied = true;
  for (std::size_t j = 0; j < inst.client_count(); ++j) {
    const bool criterion = ctc::pliable::client_satisfied(inst, plan, j);
    const bool oracle = ctc::pliable::brute_force_satisfied(inst, plan, j);
    agreement = agreement && criterion == oracle;
    all_satisfied = all_satisfied && criterion;
    clients.push_back({{"client", j}, {"satisfied", criterion}, {"oracle", oracle}});
  }
  ordered_json doc;
  doc["schema"] = kSchemaTag;
  doc["m"] = inst.message_count();
  doc["n"] = inst.client_count();
  doc["K"] = plan.coefficients.rows();
  doc["q"] = plan.coefficients.field().modulus();
  doc["clients"] = std::move(clients);
  doc["agreement"] = agreement;
  doc["all_satisfied"] = all_satisfied;
  emit(doc.dump(2) + "\n", opt.out);
}

struct PliableRandomOptions {
  std::size_t m = 0, n = 0;
  double density = 0.5;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
};

void run_pliable_random(const PliableRandomOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  const auto inst = ctc::pliable::Instance::random(opt.m, opt.n, opt.density, rng);
  emit(inst.serialize(), opt.out);
}

struct CombnetOptions {
  std::size_t m = 0, k = 0, u = 0;
  std::uint32_t q = 0;  // 0 = pick the smallest prime above k*u
  std::size_t trials = 1000;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
};

void run_combnet(const CombnetOptions& opt) {
  const auto net = ctc::combnet::build(opt.m, opt.k, opt.u);
  const std::uint32_t q =
      opt.q != 0 ? opt.q
                 : next_prime_above(static_cast<std::uint32_t>(opt.k * opt.u));
  const ctc::gf::PrimeField field(q);
  const auto report = ctc::combnet::gains(net, field, opt.trials, opt.seed);
  ordered_json doc;
  doc["schema"] = kSchemaTag;
  doc["m"] = report.m;
  doc["k"] = report.k;
  doc["u"] = report.u;
  doc["q"] = report.q;
  doc["Rc"] = report.rc;
  doc["Rw"] = static_cast<double>(report.rw_num) / static_cast<double>(report.rw_den);
  doc["Gw"] = report.gw;
  doc["Ra_estimate"] = report.ra_estimate;
  doc["Ra_stderr"] = report.ra_std_error;
  if (report.ra_bound.has_value()) {
    doc["Ra_bound"] = *report.ra_bound;
  } else {
    doc["Ra_bound"] = nullptr;
  }
  doc["Ga_estimate"] = report.ga_estimate;
  doc["trials"] = report.trials;
  doc["seed"] = report.seed;
  doc["audit_mode"] = report.audit_mode;
  doc["audits_ok"] = report.audits_ok;
  emit(doc.dump(2) + "\n", opt.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"content-type coding toolkit: rate regions, broadcast simulation, "
               "pliable index coding and combination-network gains"};
  app.require_subcommand(1);

  RegionsOptions regions_opt;
  auto* regions_cmd =
      app.add_subcommand("regions", "Trace both rate-region boundaries as CSV");
  regions_cmd->add_option("--eps1", regions_opt.eps1, "erasure probability, receiver 1")
      ->required();
  regions_cmd->add_option("--eps2", regions_opt.eps2, "erasure probability, receiver 2")
      ->required();
  regions_cmd->add_option("--alpha", regions_opt.alpha, "cross-demand fraction")
      ->required();
  regions_cmd->add_option("--rays", regions_opt.rays, "rays per boundary (default 64)");
  regions_cmd->add_option("--out", regions_opt.out, "output file (default stdout)");
  regions_cmd->callback([&] { run_regions(regions_opt); });

  BroadcastOptions broadcast_opt;
  auto* broadcast_cmd =
      app.add_subcommand("broadcast", "Monte Carlo two-receiver broadcast simulation");
  broadcast_cmd
      ->add_option("--strategy", broadcast_opt.strategy, "content or message")
      ->check(CLI::IsMember({"content", "message"}))
      ->required();
  broadcast_cmd->add_option("--eps1", broadcast_opt.eps1)->required();
  broadcast_cmd->add_option("--eps2", broadcast_opt.eps2)->required();
  broadcast_cmd->add_option("--alpha", broadcast_opt.alpha)->required();
  broadcast_cmd->add_option("--k1", broadcast_opt.k1, "type-1 message count")->required();
  broadcast_cmd->add_option("--k2", broadcast_opt.k2, "type-2 message count")->required();
  broadcast_cmd->add_option("--trials", broadcast_opt.trials, "trial count (default 1)");
  broadcast_cmd->add_option("--seed", broadcast_opt.seed, "base seed (default 12345)");
  broadcast_cmd->add_option("--mode", broadcast_opt.mode, "counting or coded")
      ->check(CLI::IsMember({"counting", "coded"}));
  broadcast_cmd->add_flag("--per-trial", broadcast_opt.per_trial,
                          "include the per-trial array");
  broadcast_cmd->add_option("--out", broadcast_opt.out);
  broadcast_cmd->callback([&] { run_broadcast(broadcast_opt); });

  auto* pliable_cmd = app.add_subcommand("pliable", "Pliable index coding tools");
  pliable_cmd->require_subcommand(1);

  PliableCompleteOptions complete_opt;
  auto* complete_cmd = pliable_cmd->add_subcommand(
      "complete", "Build the one-client-per-subset instance");
  complete_cmd->add_option("--m", complete_opt.m, "message count")->required();
  complete_cmd->add_option("--q", complete_opt.q, "field modulus (default 2)");
  complete_cmd->add_flag("--min-k", complete_opt.min_k,
                         "exhaustively certify the minimum code length");
  complete_cmd->add_option("--kmax", complete_opt.kmax,
                           "search limit for --min-k (default 8)");
  complete_cmd->add_option("--instance-out", complete_opt.instance_out,
                           "also write the instance file here");
  complete_cmd->add_option("--out", complete_opt.out);
  complete_cmd->callback([&] { run_pliable_complete(complete_opt); });

  PliableCheckOptions check_opt;
  auto* check_cmd = pliable_cmd->add_subcommand(
      "check", "Check every client under the criterion and the oracle");
  check_cmd->add_option("--instance", check_opt.instance_path, "instance file")
      ->required();
  check_cmd->add_option("--matrix", check_opt.matrix_path, "coding matrix file")
      ->required();
  check_cmd->add_option("--out", check_opt.out);
  check_cmd->callback([&] { run_pliable_check(check_opt); });

  PliableRandomOptions random_opt;
  auto* random_cmd =
      pliable_cmd->add_subcommand("random", "Sample a random instance file");
  random_cmd->add_option("--m", random_opt.m, "message count")->required();
  random_cmd->add_option("--n", random_opt.n, "client count")->required();
  random_cmd->add_option("--density", random_opt.density, "per-message missing probability")
      ->required();
  random_cmd->add_option("--seed", random_opt.seed, "seed (default 12345)");
  random_cmd->add_option("--out", random_opt.out);
  random_cmd->callback([&] { run_pliable_random(random_opt); });

  CombnetOptions combnet_opt;
  auto* combnet_cmd =
      app.add_subcommand("combnet", "Combination-network gain report");
  combnet_cmd->add_option("--m", combnet_opt.m, "source/type count")->required();
  combnet_cmd->add_option("--k", combnet_opt.k, "middle-layer edge count")->required();
  combnet_cmd->add_option("--u", combnet_opt.u, "messages per type")->required();
  combnet_cmd->add_option("--q", combnet_opt.q,
                          "field modulus (default: smallest prime above k*u)");
  combnet_cmd->add_option("--trials", combnet_opt.trials,
                          "average-rate trials (default 1000)");
  combnet_cmd->add_option("--seed", combnet_opt.seed, "seed (default 12345)");
  combnet_cmd->add_option("--out", combnet_opt.out);
  combnet_cmd->callback([&] { run_combnet(combnet_opt); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ctc::BudgetError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
