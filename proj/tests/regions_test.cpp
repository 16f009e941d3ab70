#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "ctc/regions.hpp"
#include "ctc/rng.hpp"
#include "doctest.h"

using namespace ctc;
using namespace ctc::regions;
using broadcast::Workload;

TEST_CASE("derived channel constants") {
  const auto ch = derive_channel(0.4, 0.3);
  CHECK(ch.eps12 == doctest::Approx(0.12).epsilon(1e-12));
  CHECK(std::abs(ch.phi1 - 0.682) < 5e-4);  // 0.681818...
  CHECK(std::abs(ch.phi2 - 0.795) < 5e-4);  // 0.795454...

  const auto clean = derive_channel(0.0, 0.0);
  CHECK(clean.phi1 == 1.0);
  CHECK(clean.phi2 == 1.0);

  const auto even = derive_channel(0.5, 0.5);
  CHECK(even.eps12 == 0.25);
  CHECK(even.phi1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(even.phi2 == even.phi1);

  CHECK_THROWS_AS(derive_channel(1.0, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(derive_channel(0.2, -0.1), std::invalid_argument);
}

TEST_CASE("corner point membership") {
  const auto ch = derive_channel(0.4, 0.3);
  const RatePoint corner{0.6, 0.7};
  CHECK(content_region_contains(ch, 0.85, corner));
  CHECK_FALSE(message_region_contains(ch, 0.85, corner));
  const auto cons = message_constraints(ch, 0.85, corner);
  CHECK(std::abs(cons[2] - 1.0 - 0.117) < 2e-3);  // 1.116708...

  CHECK(content_region_contains(ch, 0.85, {0.0, 0.0}));
  CHECK(message_region_contains(ch, 0.85, {0.0, 0.0}));
  CHECK_FALSE(content_region_contains(ch, 0.85, {-0.01, 0.1}));
}

TEST_CASE("noiseless content region is a capped sum constraint") {
  const auto ch = derive_channel(0.0, 0.0);
  CHECK_FALSE(content_region_contains(ch, 0.5, {0.9, 0.7}));  // 1.6 > 1.5
  CHECK(content_region_contains(ch, 0.5, {0.9, 0.6}));
  CHECK(content_region_contains(ch, 0.5, {0.75, 0.75}));
}

TEST_CASE("message region boundary example at alpha 0") {
  const auto ch = derive_channel(0.4, 0.3);
  CHECK(message_region_contains(ch, 0.0, {0.3, 0.44}));  // 0.3/0.6 + 0.44/0.88 = 1
  CHECK_FALSE(message_region_contains(ch, 0.0, {0.3, 0.4401}));
}

TEST_CASE("boundary trace stays on the boundary") {
  const auto ch = derive_channel(0.4, 0.3);
  for (const auto kind : {RegionKind::content, RegionKind::message}) {
    const auto pts = boundary_trace(ch, 0.7, kind, 33);
    CHECK(pts.size() == 33);
    for (const auto& p : pts) {
      const bool inside = kind == RegionKind::content
                              ? content_region_contains(ch, 0.7, p)
                              : message_region_contains(ch, 0.7, p);
      CHECK(inside);
      const RatePoint outside{p.r1 * (1.0 + 1e-6) + 1e-7, p.r2 * (1.0 + 1e-6) + 1e-7};
      const bool beyond = kind == RegionKind::content
                              ? content_region_contains(ch, 0.7, outside)
                              : message_region_contains(ch, 0.7, outside);
      CHECK_FALSE(beyond);
    }
  }
  CHECK_THROWS_AS(boundary_trace(ch, 0.7, RegionKind::content, 1), std::invalid_argument);
}

TEST_CASE("noiseless boundary follows r1 + r2 = 1 + alpha within caps") {
  const auto ch = derive_channel(0.0, 0.0);
  for (const auto& p : boundary_trace(ch, 0.5, RegionKind::content, 64)) {
    const bool on_sum = std::abs(p.r1 + p.r2 - 1.5) < 1e-6;
    const bool on_cap = std::max(p.r1, p.r2) > 1.0 - 1e-6;
    CHECK((on_sum || on_cap));
  }
}

TEST_CASE("content boundary dominates the message boundary") {
  const auto ch = derive_channel(0.4, 0.3);
  for (const double alpha : {0.5, 0.7, 0.85}) {
    bool strict_gain = false;
    const auto message_pts = boundary_trace(ch, alpha, RegionKind::message, 64);
    for (const auto& p : message_pts) {
      CHECK(content_region_contains(ch, alpha, p));
    }
    for (const auto& p : boundary_trace(ch, alpha, RegionKind::content, 64)) {
      if (!message_region_contains(ch, alpha, p)) strict_gain = true;
    }
    CHECK(strict_gain);
  }
}

TEST_CASE("downward closure of both regions") {
  std::mt19937_64 rng(321);
  for (int it = 0; it < 20000; ++it) {
    const auto ch = derive_channel(uniform01(rng) * 0.95, uniform01(rng) * 0.95);
    const double alpha = uniform01(rng);
    const RatePoint p{uniform01(rng) * 1.2, uniform01(rng) * 1.2};
    const RatePoint q{p.r1 * uniform01(rng), p.r2 * uniform01(rng)};
    if (content_region_contains(ch, alpha, p)) CHECK(content_region_contains(ch, alpha, q));
    if (message_region_contains(ch, alpha, p)) CHECK(message_region_contains(ch, alpha, q));
  }
}

TEST_CASE("every message-region point lies in the content region") {
  std::mt19937_64 rng(654);
  std::size_t hits = 0;
  for (int it = 0; it < 100000; ++it) {
    const auto ch = derive_channel(uniform01(rng) * 0.95, uniform01(rng) * 0.95);
    const double alpha = uniform01(rng);
    const RatePoint p{uniform01(rng) * 1.2, uniform01(rng) * 1.2};
    if (message_region_contains(ch, alpha, p)) {
      ++hits;
      CHECK(content_region_contains(ch, alpha, p));
    }
  }
  CHECK(hits > 1000);  // the sample actually exercised the implication
}

TEST_CASE("regions coincide at alpha 0") {
  std::mt19937_64 rng(987);
  for (int it = 0; it < 50000; ++it) {
    const auto ch = derive_channel(uniform01(rng) * 0.95, uniform01(rng) * 0.95);
    const RatePoint p{uniform01(rng) * 1.2, uniform01(rng) * 1.2};
    CHECK(message_region_contains(ch, 0.0, p) == content_region_contains(ch, 0.0, p));
  }
}

TEST_CASE("expected quantities reproduce the corner workload") {
  const auto ch = derive_channel(0.4, 0.3);
  const auto plan = expected_quantities(ch, Workload(100, 3800, 0.85));
  CHECK(plan.kprime1 == doctest::Approx(73.3333).epsilon(1e-4));
  CHECK(plan.kprime2 == doctest::Approx(1791.4286).epsilon(1e-4));
  CHECK(plan.kr1 == doctest::Approx(2058.5714).epsilon(1e-4));
  CHECK(plan.kr2 == doctest::Approx(2401.6667).epsilon(1e-4));
  CHECK(plan.phase1_slots == doctest::Approx(2119.0476).epsilon(1e-4));
  CHECK(plan.phase2_slots == doctest::Approx(3430.9524).epsilon(1e-4));
  CHECK(plan.total_slots == doctest::Approx(5550.0).epsilon(1e-9));
  CHECK(plan.r1 == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(plan.r2 == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("expected quantities degenerate cases") {
  const auto clean = derive_channel(0.0, 0.0);
  const auto plan = expected_quantities(clean, Workload(1000, 500, 0.5));
  CHECK(plan.kprime1 == 1000.0);
  CHECK(plan.kprime2 == 500.0);
  CHECK(plan.kr1 == 0.0);
  CHECK(plan.kr2 == 0.0);
  CHECK(plan.total_slots == 1500.0);

  // alpha below both phi: full pools drain in phase 1
  const auto ch = derive_channel(0.4, 0.3);
  const auto low = expected_quantities(ch, Workload(200, 400, 0.5));
  CHECK(low.kprime1 == 200.0);
  CHECK(low.kprime2 == 400.0);
}

TEST_CASE("expected point sits on the content region boundary") {
  for (const double e1 : {0.0, 0.2, 0.4, 0.6, 0.85}) {
    for (const double e2 : {0.0, 0.3, 0.5, 0.7}) {
      const auto ch = derive_channel(e1, e2);
      for (const double alpha : {0.0, 0.25, 0.5, 0.75, 0.9, 1.0}) {
        for (const auto& [k1, k2] : std::vector<std::pair<std::size_t, std::size_t>>{
                 {20, 20}, {20, 200}, {200, 20}, {2000, 20}, {20, 2000}}) {
          const auto plan = expected_quantities(ch, Workload(k1, k2, alpha));
          const auto cons = content_constraints(ch, alpha, RatePoint{plan.r1, plan.r2});
          const double binding = *std::max_element(cons.begin(), cons.end());
          CHECK(std::abs(binding - 1.0) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("expected quantities are symmetric under swapping the setup") {
  const auto ch = derive_channel(0.4, 0.3);
  const auto swapped = derive_channel(0.3, 0.4);
  const auto a = expected_quantities(ch, Workload(100, 3800, 0.85));
  const auto b = expected_quantities(swapped, Workload(3800, 100, 0.85));
  CHECK(a.r1 == doctest::Approx(b.r2).epsilon(1e-15));
  CHECK(a.r2 == doctest::Approx(b.r1).epsilon(1e-15));
  CHECK(a.total_slots == doctest::Approx(b.total_slots).epsilon(1e-15));
}

TEST_CASE("case classification") {
  const auto ch = derive_channel(0.4, 0.3);  // phi1 = 0.6818, phi2 = 0.7955
  CHECK(classify_case(ch, 0.5).c == AlphaCase::case1);
  CHECK(classify_case(ch, 0.7).c == AlphaCase::case2);
  const auto high = classify_case(ch, 0.85);
  CHECK(high.c == AlphaCase::case3);
  CHECK(high.corner_achievable);  // 0.795 < 0.85 < 0.857
  CHECK(content_region_contains(ch, 0.85, {1.0 - 0.4, 1.0 - 0.3}));

  CHECK_FALSE(classify_case(ch, 0.87).corner_achievable);  // above phi1/phi2
  CHECK_FALSE(classify_case(ch, 0.5).corner_achievable);

  // ties resolve to the lower case
  CHECK(classify_case(ch, ch.phi1).c == AlphaCase::case1);
  CHECK(classify_case(ch, ch.phi2).c == AlphaCase::case2);
}

TEST_CASE("boundary csv formatting") {
  const auto ch = derive_channel(0.4, 0.3);
  const auto pts = boundary_trace(ch, 0.85, RegionKind::content, 4);
  CHECK(boundary_csv_header() == "strategy,alpha,eps1,eps2,r1,r2");
  const auto rows = boundary_csv_rows(ch, 0.85, RegionKind::content, pts);
  CHECK(std::count(rows.begin(), rows.end(), '\n') == 4);
  CHECK(rows.find("content,0.850000000000,0.400000000000,0.300000000000,") == 0);
}
