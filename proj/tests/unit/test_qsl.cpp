#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "properties.hpp"
#include "staforge/cdshaper.hpp"
#include "staforge/error.hpp"
#include "staforge/langevin.hpp"
#include "staforge/qsl.hpp"
#include "staforge/units.hpp"

using namespace staforge;

namespace {

const double kKappa = 1.0 / 62.88;

Trace cd_ringup(double delta, double dalpha, double tf) {
  const ModeNetwork net = ModeNetwork::single_mode(delta, kKappa);
  const double eps0 = dalpha * std::abs(cplx(delta, -kKappa / 2));
  const Pulse ref = reference_library(ReferenceShape::Sin2Ramp, eps0, tf);
  return propagate(net, cd_pulse(ref, delta, kKappa), Eigen::VectorXcd::Zero(1), uniform_grid(0.0, tf, 2001));
}

Trace quench(double delta, double dalpha) {
  const ModeNetwork net = ModeNetwork::single_mode(delta, kKappa);
  const double eps0 = dalpha * std::abs(cplx(delta, -kKappa / 2));
  return propagate(net, reference_library(ReferenceShape::Quench, eps0, 1.0), Eigen::VectorXcd::Zero(1),
                   uniform_grid(0.0, 30.0 / kKappa, 20001));
}

}  // namespace

TEST(MaxEfficiency, Limits) {
  EXPECT_NEAR(max_efficiency(1e-6), 1.0, 1e-12);
  EXPECT_NEAR(max_efficiency(40.0), std::numbers::pi / 2 / 40.0, 1e-15);
  // Series 1 - d^2/12 + ... for small separations.
  for (double d : {1e-5, 1e-4, 1e-3}) EXPECT_NEAR(max_efficiency(d), 1.0 - d * d / 12.0, 1e-12);
  EXPECT_NEAR(max_efficiency(1.0), std::acos(std::exp(-0.5)), 1e-15);
  EXPECT_THROW(max_efficiency(0.0), Error);
}

TEST(PathLength, Basics) {
  EXPECT_EQ(path_length({1.0, 1.0, 1.0}), 0.0);
  EXPECT_DOUBLE_EQ(path_length({0.0, cplx(0.5, 0.0), cplx(2.0, 0.0)}), 2.0);
  std::vector<cplx> circle;
  for (int i = 0; i <= 4000; ++i) circle.push_back(std::polar(1.5, 2 * std::numbers::pi * i / 4000.0));
  EXPECT_NEAR(path_length(circle), 3.0 * std::numbers::pi, 1e-5);
}

TEST(PathLength, RefinementIncreasesLength) {
  const Trace coarse = quench(units::mhz_to_rad_per_ns(3.0), 1.0);
  double prev = 0.0;
  for (int stride : {64, 16, 4, 1}) {
    std::vector<cplx> p;
    const auto full = coarse.mode(0);
    for (std::size_t i = 0; i < full.size(); i += stride) p.push_back(full[i]);
    const double len = path_length(p);
    EXPECT_GE(len, prev);
    prev = len;
  }
}

TEST(Efficiency, StraightLineIsOptimal) {
  for (double d : {0.1, 1.0, 3.0}) {
    std::vector<cplx> line;
    for (int i = 0; i <= 100; ++i) line.push_back(cplx(0.2, -0.1) + std::polar(d, 0.4) * (i / 100.0));
    EXPECT_NEAR(quantum_efficiency(line), max_efficiency(d), 1e-12);
  }
  EXPECT_THROW(quantum_efficiency(std::vector<cplx>{1.0, 2.0, 1.0}), Error);
}

TEST(Efficiency, CdRingupIsAStraightLineAtAnySpeed) {
  const double delta = units::mhz_to_rad_per_ns(3.0);
  for (double tf : {30.0, 100.0, 400.0}) {
    const Trace t = cd_ringup(delta, 2.0, tf);
    const auto path = t.mode(0);
    EXPECT_NEAR(mt_path_length(t), std::abs(path.back() - path.front()), 1e-9);
    EXPECT_NEAR(quantum_efficiency(t), max_efficiency(2.0), 1e-6);
  }
}

TEST(Efficiency, DirectDrivingSpiralsAndLosesEfficiency) {
  const double d3 = units::mhz_to_rad_per_ns(3.0), d6 = units::mhz_to_rad_per_ns(6.0);
  for (double da : {0.5, 1.0, 2.0}) {
    const double e3 = quantum_efficiency(quench(d3, da));
    EXPECT_LT(e3, quantum_efficiency(cd_ringup(d3, da, 100.0)));
    EXPECT_LT(quantum_efficiency(quench(d6, da)), e3);
  }
}

TEST(Efficiency, RandomizedTrajectoriesRespectTheBound) {
  const auto r = props::efficiency_bound(200, 99);
  EXPECT_TRUE(r.passed()) << r.worst;
}
