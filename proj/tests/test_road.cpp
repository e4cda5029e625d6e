#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qcar/road.hpp"
#include "qcar/types.hpp"

using namespace qcar;

namespace {

RandomRoadSpec d_road(std::uint64_t seed) {
  RandomRoadSpec spec;
  spec.road_class = IsoRoadClass::from_label('D');
  spec.seed = seed;
  return spec;
}

/// Least-squares slope of log10(psd) against log10(n) over [n_lo, n_hi].
double loglog_slope(const PsdEstimate& est, double n_lo, double n_hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = 0; i < est.n.size(); ++i) {
    if (est.n[i] < n_lo || est.n[i] > n_hi || est.psd[i] <= 0.0) continue;
    const double x = std::log10(est.n[i]);
    const double y = std::log10(est.psd[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  REQUIRE(count > 10);
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

}  // namespace

TEST_CASE("road grades quadruple the PSD magnitude per letter") {
  const struct {
    char label;
    double gq;
  } table[] = {{'A', 16e-6},    {'B', 64e-6},    {'C', 256e-6},   {'D', 1024e-6},
               {'E', 4096e-6},  {'F', 16384e-6}, {'G', 65536e-6}, {'H', 262144e-6}};
  for (const auto& row : table) {
    const IsoRoadClass rc = IsoRoadClass::from_label(row.label);
    CHECK(rc.label == row.label);
    CHECK(rc.gq_n0 == row.gq);
  }
  CHECK(IsoRoadClass::from_label('d').gq_n0 == 1024e-6);  // case-insensitive
  CHECK(IsoRoadClass::from_label("C").gq_n0 == 256e-6);
  CHECK_THROWS_AS(IsoRoadClass::from_label('I'), std::invalid_argument);
  CHECK_THROWS_AS(IsoRoadClass::from_label('1'), std::invalid_argument);
  CHECK_THROWS_AS(IsoRoadClass::from_label("DD"), std::invalid_argument);
  CHECK_THROWS_AS(IsoRoadClass::from_label(""), std::invalid_argument);
}

TEST_CASE("target PSD follows the power law anchored at the reference frequency") {
  const IsoRoadClass d = IsoRoadClass::from_label('D');
  const IsoRoadClass a = IsoRoadClass::from_label('A');

  CHECK(target_psd(d, 0.1, 0.1, 2.0) == doctest::Approx(1024e-6).epsilon(1e-12));
  CHECK(target_psd(d, 1.0, 0.1, 2.0) == doctest::Approx(1.024e-5).epsilon(1e-12));
  CHECK(target_psd(a, 0.1, 0.1, 2.0) == doctest::Approx(16e-6).epsilon(1e-12));
  // Steeper waviness: one octave above n0 divides by 2^3.
  CHECK(target_psd(d, 0.2, 0.1, 3.0) == doctest::Approx(128e-6).epsilon(1e-12));

  CHECK_THROWS_AS(target_psd(d, 0.0, 0.1, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(target_psd(d, -1.0, 0.1, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(target_psd(d, 0.1, 0.0, 2.0), std::invalid_argument);
}

TEST_CASE("random road generation is deterministic in the seed") {
  const RoadTrace one = generate_random_road(d_road(1234), 10.0);
  const RoadTrace two = generate_random_road(d_road(1234), 10.0);
  REQUIRE(one.q.size() == two.q.size());
  REQUIRE(one.q.size() == 10000);
  CHECK(one.q == two.q);
  CHECK(one.t == two.t);
  CHECK(one.q.front() == 0.0);
  CHECK(one.spec.seed == 1234);

  const RoadTrace other = generate_random_road(d_road(1235), 10.0);
  CHECK(one.q != other.q);
}

TEST_CASE("random road amplitude scales with the square root of the PSD magnitude") {
  RandomRoadSpec base = d_road(77);
  RandomRoadSpec scaled = base;
  scaled.road_class.gq_n0 = 4.0 * base.road_class.gq_n0;

  const RoadTrace q1 = generate_random_road(base, 5.0);
  const RoadTrace q2 = generate_random_road(scaled, 5.0);
  REQUIRE(q1.q.size() == q2.q.size());
  for (std::size_t i = 0; i < q1.q.size(); ++i) {
    CHECK(std::abs(q2.q[i] - 2.0 * q1.q[i]) <= 1e-12 * (1.0 + std::abs(2.0 * q1.q[i])));
  }

  RandomRoadSpec flat = base;
  flat.road_class.gq_n0 = 0.0;
  const RoadTrace q0 = generate_random_road(flat, 5.0);
  CHECK(std::all_of(q0.q.begin(), q0.q.end(), [](double v) { return v == 0.0; }));
}

TEST_CASE("random road generation rejects unusable specs") {
  CHECK_THROWS_AS(generate_random_road(d_road(1), 0.5e-3), std::invalid_argument);  // < dt
  RandomRoadSpec bad = d_road(1);
  bad.v = 0.0;
  CHECK_THROWS_AS(generate_random_road(bad, 1.0), std::invalid_argument);
  bad = d_road(1);
  bad.dt = -1e-3;
  CHECK_THROWS_AS(generate_random_road(bad, 1.0), std::invalid_argument);
  bad = d_road(1);
  bad.n0 = 0.0;
  CHECK_THROWS_AS(generate_random_road(bad, 1.0), std::invalid_argument);
}

TEST_CASE("step road switches exactly at the start time") {
  const StepRoadSpec spec{0.02, 2.0};
  const RoadTrace road = generate_step_road(spec, 4.0, 1e-3);
  REQUIRE(road.q.size() == 4000);
  CHECK(road.q[1999] == 0.0);   // t = 1.999 s
  CHECK(road.q[2000] == 0.02);  // t = 2.000 s
  CHECK(road.q.front() == 0.0);
  CHECK(road.q.back() == 0.02);

  const RoadTrace flat = generate_step_road({0.0, 2.0}, 4.0, 1e-3);
  CHECK(std::all_of(flat.q.begin(), flat.q.end(), [](double v) { return v == 0.0; }));

  CHECK_THROWS_AS(generate_step_road(spec, 2.0, 1e-3), std::invalid_argument);  // ends at start
  CHECK_THROWS_AS(generate_step_road(spec, 4.0, 0.0), std::invalid_argument);
}

TEST_CASE("step road samples depend only on the sample time, not the grid") {
  const StepRoadSpec spec{0.02, 2.0};
  const RoadTrace fine = generate_step_road(spec, 4.0, 1e-3);
  const RoadTrace coarse = generate_step_road(spec, 4.0, 2.5e-3);
  // Compare at every common multiple of 5 ms.
  for (std::size_t k = 0; 5 * k < fine.q.size() && 2 * k < coarse.q.size(); ++k) {
    CHECK(fine.q[5 * k] == coarse.q[2 * k]);
  }
}

TEST_CASE("PSD estimate concentrates a sinusoid's power at its spatial frequency") {
  const double amplitude = 3.0, f = 5.0, v = 20.0, dt = 1e-3;
  RoadTrace trace;
  trace.dt = dt;
  const std::size_t len = 60000;
  trace.t.resize(len);
  trace.q.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    trace.t[i] = static_cast<double>(i) * dt;
    trace.q[i] = amplitude * std::sin(2.0 * kPi * f * trace.t[i]);
  }

  const PsdEstimate est = estimate_psd(trace, v);
  REQUIRE(est.n.size() == est.psd.size());
  REQUIRE(est.n.size() > 100);

  // Total power (Parseval): integral of the one-sided density = amplitude^2 / 2.
  const double dn = est.n[1] - est.n[0];
  double integral = 0.0;
  for (double p : est.psd) integral += p * dn;
  CHECK(integral == doctest::Approx(amplitude * amplitude / 2.0).epsilon(0.10));

  // The peak bin sits within one bin of n = f/v = 0.25 cycles/m.
  const std::size_t peak =
      static_cast<std::size_t>(std::max_element(est.psd.begin(), est.psd.end()) -
                               est.psd.begin());
  CHECK(std::abs(est.n[peak] - f / v) <= dn);
}

TEST_CASE("PSD of a zero trace is identically zero") {
  RoadTrace trace;
  trace.dt = 1e-3;
  trace.t.assign(4096, 0.0);
  trace.q.assign(4096, 0.0);
  for (std::size_t i = 0; i < trace.t.size(); ++i) trace.t[i] = static_cast<double>(i) * trace.dt;
  const PsdEstimate est = estimate_psd(trace, 20.0);
  CHECK(std::all_of(est.psd.begin(), est.psd.end(), [](double p) { return p == 0.0; }));
}

TEST_CASE("PSD estimation rejects unusable inputs") {
  RoadTrace trace;
  trace.dt = 1e-3;
  trace.t.assign(300, 0.0);
  trace.q.assign(300, 0.0);
  CHECK_THROWS_AS(estimate_psd(trace, 20.0, 256), std::invalid_argument);  // too short
  trace.t.assign(4096, 0.0);
  trace.q.assign(4096, 0.0);
  CHECK_THROWS_AS(estimate_psd(trace, 20.0, 300), std::invalid_argument);  // not a power of two
  CHECK_THROWS_AS(estimate_psd(trace, 0.0), std::invalid_argument);
  trace.dt = 0.0;
  CHECK_THROWS_AS(estimate_psd(trace, 20.0), std::invalid_argument);
  trace.dt = 1e-3;
  trace.q.resize(100);
  CHECK_THROWS_AS(estimate_psd(trace, 20.0), std::invalid_argument);  // t/q length mismatch
}

TEST_CASE("generated road spectrum matches the target power law in slope and level") {
  for (std::uint64_t seed : {11u, 222u, 3333u}) {
    const RoadTrace road = generate_random_road(d_road(seed), 100.0);
    const PsdEstimate est = estimate_psd(road, 20.0);

    // Slope of the displacement PSD against spatial frequency: target exponent -2.
    const double slope = loglog_slope(est, 0.05, 2.0);
    CHECK(slope == doctest::Approx(-2.0).epsilon(0.175));

    // Level: geometric mean ratio to the target over the same band.
    const IsoRoadClass d = IsoRoadClass::from_label('D');
    double log_ratio = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < est.n.size(); ++i) {
      if (est.n[i] < 0.05 || est.n[i] > 2.0 || est.psd[i] <= 0.0) continue;
      log_ratio += std::log(est.psd[i] / target_psd(d, est.n[i], 0.1, 2.0));
      ++count;
    }
    REQUIRE(count > 10);
    const double ratio = std::exp(log_ratio / count);
    CHECK(ratio > 0.6);
    CHECK(ratio < 1.6);
  }
}
