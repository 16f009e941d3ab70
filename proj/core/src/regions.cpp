#include "ctc/regions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace ctc::regions {

namespace {

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

bool all_within(const std::array<double, 4>& c, const RatePoint& p) {
  if (p.r1 < -kBoundaryTol || p.r2 < -kBoundaryTol) return false;
  return std::all_of(c.begin(), c.end(),
                     [](double v) { return v <= 1.0 + kBoundaryTol; });
}

const char* kind_name(RegionKind kind) {
  return kind == RegionKind::content ? "content" : "message";
}

}  // namespace

DerivedChannel derive_channel(double eps1, double eps2) {
  if (!(eps1 >= 0.0 && eps1 < 1.0) || !(eps2 >= 0.0 && eps2 < 1.0)) {
    throw std::invalid_argument("erasure probabilities must lie in [0, 1)");
  }
  DerivedChannel ch{};
  ch.eps1 = eps1;
  ch.eps2 = eps2;
  ch.eps12 = eps1 * eps2;
  ch.phi1 = (1.0 - eps1) / (1.0 - ch.eps12);
  ch.phi2 = (1.0 - eps2) / (1.0 - ch.eps12);
  return ch;
}

std::array<double, 4> content_constraints(const DerivedChannel& ch, double alpha,
                                          const RatePoint& p) {
  const double c1 = 1.0 - ch.eps1;
  const double c2 = 1.0 - ch.eps2;
  const double cap1 = alpha > 0.0 ? std::min(c1, c2 / alpha) : c1;
  const double cap2 = alpha > 0.0 ? std::min(c2, c1 / alpha) : c2;
  // (phi_i - alpha)^+ / (1 - alpha^2); the positive part is zero whenever
  // alpha >= phi_i, which covers alpha = 1 before the denominator vanishes.
  const double g1 = positive_part(ch.phi1 - alpha);
  const double g2 = positive_part(ch.phi2 - alpha);
  const double w1 = g1 > 0.0 ? g1 / (1.0 - alpha * alpha) : 0.0;
  const double w2 = g2 > 0.0 ? g2 / (1.0 - alpha * alpha) : 0.0;
  return {
      p.r1 / cap1,
      p.r2 / cap2,
      p.r1 / c1 * (1.0 - alpha * w1) + p.r2 / c1 * w1,
      p.r2 / c2 * (1.0 - alpha * w2) + p.r1 / c2 * w2,
  };
}

std::array<double, 4> message_constraints(const DerivedChannel& ch, double alpha,
                                          const RatePoint& p) {
  const double c1 = 1.0 - ch.eps1;
  const double c2 = 1.0 - ch.eps2;
  const double c12 = 1.0 - ch.eps12;
  const double cap1 = std::min(c1, c2 / (1.0 - (1.0 - ch.phi2) * (1.0 - alpha)));
  const double cap2 = std::min(c2, c1 / (1.0 - (1.0 - ch.phi1) * (1.0 - alpha)));
  return {
      p.r1 / cap1,
      p.r2 / cap2,
      p.r1 / c1 * (1.0 - alpha * ch.phi1 / (1.0 + alpha)) + p.r2 / c12 / (1.0 + alpha),
      p.r1 / c12 / (1.0 + alpha) + p.r2 / c2 * (1.0 - alpha * ch.phi2 / (1.0 + alpha)),
  };
}

bool content_region_contains(const DerivedChannel& ch, double alpha, const RatePoint& p) {
  return all_within(content_constraints(ch, alpha, p), p);
}

bool message_region_contains(const DerivedChannel& ch, double alpha, const RatePoint& p) {
  return all_within(message_constraints(ch, alpha, p), p);
}

std::vector<RatePoint> boundary_trace(const DerivedChannel& ch, double alpha,
                                      RegionKind kind, std::size_t n_rays) {
  if (n_rays < 2) throw std::invalid_argument("boundary_trace needs n_rays >= 2");
  const auto contains = [&](const RatePoint& p) {
    return kind == RegionKind::content ? content_region_contains(ch, alpha, p)
                                       : message_region_contains(ch, alpha, p);
  };
  std::vector<RatePoint> points;
  points.reserve(n_rays);
  for (std::size_t i = 0; i < n_rays; ++i) {
    const double theta = (static_cast<double>(i) + 0.5) *
                         (std::numbers::pi / 2.0 / static_cast<double>(n_rays));
    const double dx = std::cos(theta), dy = std::sin(theta);
    // Both regions are downward closed, so containment is monotone along a
    // ray from the origin and bisection applies. Rates are capped by 1.
    double lo = 0.0, hi = 2.0;
    while (hi - lo > 1e-9) {
      const double mid = 0.5 * (lo + hi);
      if (contains({mid * dx, mid * dy})) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    points.push_back({lo * dx, lo * dy});
  }
  return points;
}

std::string boundary_csv_header() { return "strategy,alpha,eps1,eps2,r1,r2"; }

std::string boundary_csv_rows(const DerivedChannel& ch, double alpha, RegionKind kind,
                              const std::vector<RatePoint>& points) {
  std::string out;
  char buf[160];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof(buf), "%s,%.12f,%.12f,%.12f,%.12f,%.12f\n",
                  kind_name(kind), alpha, ch.eps1, ch.eps2, p.r1, p.r2);
    out += buf;
  }
  return out;
}

ExpectedPlan expected_quantities(const DerivedChannel& ch, const broadcast::Workload& w) {
  ExpectedPlan plan{};
  const double k1 = static_cast<double>(w.k1);
  const double k2 = static_cast<double>(w.k2);
  const double alpha = w.alpha;
  // Type-i transmissions stop when the cross receiver's queue closes the
  // alpha*k_i gap, so the expected pool drain uses the cross phi.
  const auto kprime = [alpha](double k, double phi_cross) {
    const double gap = positive_part(alpha - phi_cross);
    return gap > 0.0 ? (1.0 - gap / (1.0 - phi_cross)) * k : k;
  };
  plan.kprime1 = kprime(k1, ch.phi2);
  plan.kprime2 = kprime(k2, ch.phi1);
  plan.m11 = plan.kprime1 * ch.phi1;
  plan.m12 = plan.kprime1 * ch.phi2;
  plan.m21 = plan.kprime2 * ch.phi1;
  plan.m22 = plan.kprime2 * ch.phi2;
  plan.phase1_slots = (plan.kprime1 + plan.kprime2) / (1.0 - ch.eps12);
  const double leftovers = (k1 - plan.kprime1) + (k2 - plan.kprime2);
  plan.kr1 = (plan.kprime1 - plan.m11) + leftovers;
  plan.kr2 = (plan.kprime2 - plan.m22) + leftovers;
  plan.phase2_slots =
      std::max(plan.kr1 / (1.0 - ch.eps1), plan.kr2 / (1.0 - ch.eps2));
  plan.total_slots = plan.phase1_slots + plan.phase2_slots;
  plan.r1 = (k1 + alpha * k2) / plan.total_slots;
  plan.r2 = (k2 + alpha * k1) / plan.total_slots;
  return plan;
}

CaseInfo classify_case(const DerivedChannel& ch, double alpha) {
  const double lo = std::min(ch.phi1, ch.phi2);
  const double hi = std::max(ch.phi1, ch.phi2);
  CaseInfo info{};
  if (alpha <= lo) {
    info.c = AlphaCase::case1;
  } else if (alpha <= hi) {
    info.c = AlphaCase::case2;
  } else {
    info.c = AlphaCase::case3;
  }
  const double ratio_cap = std::min(ch.phi1 / ch.phi2, ch.phi2 / ch.phi1);
  info.corner_achievable = alpha > hi && alpha < ratio_cap;
  return info;
}

}  // namespace ctc::regions
