#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "ctc/combnet.hpp"
#include "ctc/field.hpp"
#include "doctest.h"

using namespace ctc;
using namespace ctc::combnet;
using gf::PrimeField;

TEST_CASE("network construction and guards") {
  const Network tiny = build(1, 1, 2);
  CHECK(tiny.structures == 1);
  CHECK(tiny.receivers == 2);

  const Network mid = build(3, 6, 2);
  CHECK(mid.structures == 20);
  CHECK(mid.receivers == 160);

  CHECK(build(2, 4, 2).receivers == 24);

  CHECK_THROWS_AS(build(3, 2, 2), std::invalid_argument);   // m > k
  CHECK_THROWS_AS(build(2, 17, 2), std::invalid_argument);  // k cap
  CHECK_THROWS_AS(build(2, 4, 0), std::invalid_argument);
  CHECK_THROWS_AS(build(16, 16, 3), std::invalid_argument);  // 3^16 receivers
}

TEST_CASE("structure edges enumerate m-subsets in lexicographic order") {
  const Network net = build(2, 4, 1);
  const std::vector<std::vector<std::size_t>> expected{{0, 1}, {0, 2}, {0, 3},
                                                       {1, 2}, {1, 3}, {2, 3}};
  for (std::size_t s = 0; s < net.structures; ++s) {
    CHECK(net.structure_edges(s) == expected[s]);
  }
  CHECK_THROWS_AS(net.structure_edges(6), std::invalid_argument);
  CHECK(binomial(6, 3) == 20);
  CHECK(binomial(16, 8) == 12870);
  CHECK(binomial(4, 5) == 0);
}

TEST_CASE("worst-case requests cover every tuple once per structure") {
  const Network solo = build(2, 3, 1);
  const auto all_same = worst_case_requests(solo);
  CHECK(std::all_of(all_same.tuple_codes.begin(), all_same.tuple_codes.end(),
                    [](std::size_t c) { return c == 0; }));

  const Network net = build(2, 4, 2);
  const auto req = worst_case_requests(net);
  for (std::size_t s = 0; s < net.structures; ++s) {
    std::vector<std::size_t> codes(req.tuple_codes.begin() + s * net.tuples,
                                   req.tuple_codes.begin() + (s + 1) * net.tuples);
    std::sort(codes.begin(), codes.end());
    CHECK(codes == std::vector<std::size_t>{0, 1, 2, 3});
    const auto counts = structure_counts(net, req, s);
    for (const auto c : counts) CHECK(c == 2);  // u^{m-1}
  }
}

TEST_CASE("structure_rate implements the top-m popularity rule") {
  // worst-case demand profile
  const std::vector<std::size_t> uniform{2, 2, 2, 2};
  CHECK(structure_rate(uniform, 2, 2) == 1.0);  // m/u

  // unanimous demand profile
  const std::vector<std::size_t> unanimous{4, 0, 0, 4};
  CHECK(structure_rate(unanimous, 2, 2) == 2.0);  // m

  CHECK(structure_rate(std::vector<std::size_t>{2, 0}, 1, 2) == 1.0);
  CHECK(structure_rate(std::vector<std::size_t>{1, 1}, 1, 2) == 0.5);

  CHECK_THROWS_AS(structure_rate(std::vector<std::size_t>{1, 2, 2, 2}, 2, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(structure_rate(std::vector<std::size_t>{2, 2}, 2, 2),
                  std::invalid_argument);
}

TEST_CASE("structure_rate is invariant under relabeling within a type") {
  std::mt19937_64 rng(88);
  for (int it = 0; it < 200; ++it) {
    const std::size_t m = 1 + rng() % 3;
    const std::size_t u = 2 + rng() % 4;
    const std::size_t total = [&] {
      std::size_t t = 1;
      for (std::size_t i = 0; i < m; ++i) t *= u;
      return t;
    }();
    std::vector<std::size_t> counts(m * u, 0);
    for (std::size_t type = 0; type < m; ++type) {
      for (std::size_t r = 0; r < total; ++r) ++counts[type * u + rng() % u];
    }
    const double before = structure_rate(counts, m, u);
    CHECK(before >= static_cast<double>(m) / static_cast<double>(u));
    CHECK(before <= static_cast<double>(m));
    for (std::size_t type = 0; type < m; ++type) {
      std::shuffle(counts.begin() + type * u, counts.begin() + (type + 1) * u, rng);
    }
    CHECK(structure_rate(counts, m, u) == before);
  }
}

TEST_CASE("content multicast decodes everywhere at rate m") {
  const auto square = multicast_content_rate(build(2, 2, 2), PrimeField(3));
  CHECK(square.rate == 2.0);
  CHECK(square.all_decoded);

  const auto mid = multicast_content_rate(build(3, 6, 2), PrimeField(7));
  CHECK(mid.rate == 3.0);
  CHECK(mid.structures_checked == 20);
  CHECK(mid.all_decoded);

  const auto wide = multicast_content_rate(build(2, 4, 3), PrimeField(5));
  CHECK(wide.rate == 2.0);
  CHECK(wide.structures_checked == 6);
  CHECK(wide.all_decoded);

  CHECK_THROWS_AS(multicast_content_rate(build(3, 6, 2), PrimeField(5)),
                  std::invalid_argument);  // q <= k
}

TEST_CASE("worst-case schedule rate and audit") {
  const auto tiny = worst_case_rate(build(1, 1, 2), PrimeField(5));
  CHECK(tiny.rate_num == 1);
  CHECK(tiny.rate_den == 2);
  CHECK(tiny.rate == 0.5);
  CHECK(tiny.all_decoded);
  CHECK_FALSE(tiny.sampled);

  const auto square = worst_case_rate(build(2, 4, 2), PrimeField(11));
  CHECK(square.rate == 1.0);
  CHECK(square.structures_checked == 6);
  CHECK(square.all_decoded);

  const auto mid = worst_case_rate(build(3, 6, 2), PrimeField(13));
  CHECK(mid.rate_num == 3);
  CHECK(mid.rate_den == 2);
  CHECK(mid.all_decoded);

  // v = C(16,2) = 120 forces the sampled audit path; q must exceed k*u = 64
  const auto sampled = worst_case_rate(build(2, 16, 2), PrimeField(67), 99);
  CHECK(sampled.sampled);
  CHECK(sampled.structures_checked == 64);
  CHECK(sampled.audit_seed == 99);
  CHECK(sampled.all_decoded);

  CHECK_THROWS_AS(worst_case_rate(build(3, 6, 2), PrimeField(11)),
                  std::invalid_argument);  // q <= k*u
}

TEST_CASE("average rate estimate hits the exact mean on tiny networks") {
  const auto est = estimate_average_rate(build(1, 1, 2), 10000, 31);
  CHECK(std::abs(est.mean - 0.75) < 0.01);  // exact enumeration gives 3/4
  CHECK(est.std_error > 0.0);
  CHECK(est.std_error < 0.01);

  const auto est2 = estimate_average_rate(build(2, 2, 2), 20000, 77);
  CHECK(std::abs(est2.mean - 1.375) < 0.01);  // exact enumeration gives 11/8

  const auto single = estimate_average_rate(build(2, 4, 1), 50, 5);
  CHECK(single.mean == 2.0);  // u = 1: every trial returns m
  CHECK(single.std_error == 0.0);

  const auto again = estimate_average_rate(build(1, 1, 2), 10000, 31);
  CHECK(again.mean == est.mean);
  CHECK(again.std_error == est.std_error);

  CHECK_THROWS_AS(estimate_average_rate(build(1, 1, 2), 0, 1), std::invalid_argument);
}

TEST_CASE("average-rate bound evaluates the closed form") {
  const auto b = average_rate_bound(2, 6, 8);
  // independent recomputation, term by term
  const double uh = std::pow(8.0, 1.5);
  const double t0 = 2.0 / 8.0;
  const double t1 = 2.0 / uh;
  const double t2 = 4.0 * (1.0 + std::sqrt(std::log(8.0))) / uh;
  const double t3 = 9.0 * std::sqrt(std::log(8.0)) / (std::sqrt(15.0) * uh);
  CHECK(b.terms[0] == doctest::Approx(t0).epsilon(1e-12));
  CHECK(b.terms[1] == doctest::Approx(t1).epsilon(1e-12));
  CHECK(b.terms[2] == doctest::Approx(t2).epsilon(1e-12));
  CHECK(b.terms[3] == doctest::Approx(t3).epsilon(1e-12));
  CHECK(b.bound == doctest::Approx(0.918175).epsilon(1e-5));
  CHECK(b.structures == 15);
  CHECK(b.p1 == doctest::Approx(2.0 / uh).epsilon(1e-12));
  CHECK(b.p2 == doctest::Approx(1.0 / uh).epsilon(1e-12));
  CHECK(b.delta1 > 0.0);
  CHECK(b.delta2 > 0.0);

  CHECK_THROWS_AS(average_rate_bound(2, 6, 1), std::invalid_argument);
  CHECK_THROWS_AS(average_rate_bound(4, 2, 2), std::invalid_argument);

  for (std::size_t m = 1; m <= 4; ++m) {
    for (std::size_t u : {2, 3, 8, 32}) {
      CHECK(average_rate_bound(m, m + 2, u).bound >
            static_cast<double>(m) / static_cast<double>(u));
    }
  }
}

TEST_CASE("bound excess shrinks along a proportional growth schedule") {
  double prev = 1e300;
  for (const std::size_t u : {2, 4, 8, 16}) {
    const std::size_t m = u, k = 2 * u;
    const auto b = average_rate_bound(m, k, u);
    const double excess = b.bound - static_cast<double>(m) / static_cast<double>(u);
    CHECK(excess < prev);
    prev = excess;
  }
}

TEST_CASE("estimates stay within the proven envelope") {
  const auto net = build(2, 6, 8);
  const auto est = estimate_average_rate(net, 10000, 2024);
  const auto b = average_rate_bound(2, 6, 8);
  CHECK(est.mean >= 0.25);
  CHECK(est.mean <= b.bound + 3.0 * est.std_error);
}

TEST_CASE("gain reports") {
  const auto r1 = gains(build(3, 6, 2), PrimeField(13), 1000, 1);
  CHECK(r1.gw == 2);
  CHECK(r1.rc == 3.0);
  CHECK(r1.rw_num == 3);
  CHECK(r1.rw_den == 2);
  CHECK(r1.audits_ok);
  CHECK(r1.audit_mode == "exhaustive");
  CHECK(r1.ra_estimate >= 1.5);
  CHECK(r1.ra_estimate <= 3.0);
  CHECK(r1.ga_estimate == doctest::Approx(3.0 / r1.ra_estimate));
  CHECK(r1.ra_bound.has_value());

  const auto r2 = gains(build(2, 4, 2), PrimeField(11), 500, 2);
  CHECK(r2.gw == 2);
  CHECK(r2.audits_ok);

  const auto r3 = gains(build(2, 4, 3), PrimeField(13), 500, 3);
  CHECK(r3.gw == 3);
  CHECK(r3.audits_ok);

  const auto flat = gains(build(2, 4, 1), PrimeField(11), 50, 4);
  CHECK(flat.gw == 1);
  CHECK(flat.ra_estimate == 2.0);
  CHECK_FALSE(flat.ra_bound.has_value());
  CHECK(flat.ga_estimate == 1.0);
}

TEST_CASE("normalized average gain grows along the proportional schedule") {
  // (m, k, u) = (u, 2u, u): the top-m rule's mean rate tightens toward m/u,
  // so Ga/u climbs toward 1.
  double prev = 0.0;
  for (const std::size_t u : {2, 3, 4}) {
    const auto net = build(u, 2 * u, u);
    const auto est = estimate_average_rate(net, 400, 99);
    const double normalized =
        (static_cast<double>(u) / est.mean) / static_cast<double>(u);
    CHECK(normalized > prev + 0.02);
    prev = normalized;
  }
  CHECK(prev > 0.8);
  CHECK(prev < 1.0);
}
