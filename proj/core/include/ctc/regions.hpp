#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "ctc/broadcast.hpp"

namespace ctc::regions {

/// Channel constants shared by both rate regions: eps12 = eps1*eps2 and
/// phi_i = (1 - eps_i) / (1 - eps12), the probability that receiver i got a
/// packet given that at least one receiver did.
struct DerivedChannel {
  double eps1;
  double eps2;
  double eps12;
  double phi1;
  double phi2;
};

/// Requires eps1, eps2 in [0, 1).
DerivedChannel derive_channel(double eps1, double eps2);

struct RatePoint {
  double r1;
  double r2;
};

/// Absolute tolerance for boundary membership; the regions are closed.
inline constexpr double kBoundaryTol = 1e-12;

/// The four constraints of each region, normalized so that a point is inside
/// iff every entry is <= 1 (entries 0 and 1 are the per-rate caps, entries 2
/// and 3 the weighted-sum constraints).
std::array<double, 4> content_constraints(const DerivedChannel& ch, double alpha,
                                          const RatePoint& p);
std::array<double, 4> message_constraints(const DerivedChannel& ch, double alpha,
                                          const RatePoint& p);

bool content_region_contains(const DerivedChannel& ch, double alpha, const RatePoint& p);
bool message_region_contains(const DerivedChannel& ch, double alpha, const RatePoint& p);

enum class RegionKind { content, message };

/// Farthest contained point along n_rays directions uniformly spaced in
/// (0, pi/2), each found by bisection to absolute tolerance 1e-9.
std::vector<RatePoint> boundary_trace(const DerivedChannel& ch, double alpha,
                                      RegionKind kind, std::size_t n_rays);

/// CSV header "strategy,alpha,eps1,eps2,r1,r2".
std::string boundary_csv_header();
/// One CSV row per point, numbers in fixed 12-digit decimal format.
std::string boundary_csv_rows(const DerivedChannel& ch, double alpha, RegionKind kind,
                              const std::vector<RatePoint>& points);

/// Large-k expectations of the content-type strategy, one value per phase
/// quantity. kprime uses the cross receiver's phi: the type-i pool stops
/// when the *other* receiver's queue closes the demand gap.
struct ExpectedPlan {
  double kprime1;
  double kprime2;
  double m11, m12, m21, m22;  // m_ji with j = message type, i = receiver
  double kr1, kr2;
  double phase1_slots;  // N1
  double phase2_slots;  // N2
  double total_slots;   // T
  double r1, r2;
};

ExpectedPlan expected_quantities(const DerivedChannel& ch, const broadcast::Workload& w);

enum class AlphaCase { case1 = 1, case2 = 2, case3 = 3 };

struct CaseInfo {
  AlphaCase c;
  bool corner_achievable;  // both (1-eps1, 1-eps2) rates reachable at once
};

/// case1: alpha <= min{phi}, case3: alpha > max{phi}, case2 otherwise;
/// equality resolves to the lower case. corner_achievable iff
/// max{phi1,phi2} < alpha < min{phi1/phi2, phi2/phi1}.
CaseInfo classify_case(const DerivedChannel& ch, double alpha);

}  // namespace ctc::regions
