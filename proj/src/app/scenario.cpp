// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#include "granule/app/scenario.hpp"

#include <random>
#include <string>

#include "granule/core/error.hpp"

namespace granule::app {

namespace {

constexpr double kSmallRadius = 0.05;  // gas / settle particle radius
constexpr int kMaxPlacementTries = 10000;

// mt19937_64 output is pinned by the standard and the uint64 -> [0,1)
// mapping is explicit, so scenarios reproduce bitwise on any platform.
class Random {
 public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::mt19937_64 engine_;
};

void checkInside(const domain::AABB& box, const Vec3& position, double radius) {
  const Vec3 lo = box.min.array() + radius;
  const Vec3 hi = box.max.array() - radius;
  if ((position.array() < lo.array()).any() ||
      (position.array() > hi.array()).any())
    throw ConfigError("scenario particle does not fit inside the global box");
}

std::vector<ParticleInit> twoSphere(const SimConfig& config) {
  const Vec3 center = config.globalBox.center();
  const Vec3 offset(0.6, 0.0, 0.0);
  const double radius = 0.5;

  ParticleInit left;
  left.uid = 0;
  left.position = center - offset;
  left.velocity = Vec3(1.0, 0.0, 0.0);
  left.radius = radius;

  ParticleInit right;
  right.uid = 1;
  right.position = center + offset;
  right.velocity = Vec3(-1.0, 0.0, 0.0);
  right.radius = radius;

  checkInside(config.globalBox, left.position, radius);
  checkInside(config.globalBox, right.position, radius);
  return {left, right};
}

// Rejection-sampled non-overlapping spheres. Draw order is fixed: position
// attempts (3 draws each) until accepted, then any velocity draws.
std::vector<ParticleInit> sampled(const SimConfig& config, const Vec3& lo,
                                  const Vec3& hi, double maxSpeed) {
  const long count = config.scenario.count;
  Random random(config.scenario.seed);

  if ((lo.array() > hi.array()).any())
    throw ConfigError("global box too small for the scenario radius");

  std::vector<ParticleInit> particles;
  particles.reserve(static_cast<std::size_t>(count));
  for (long k = 0; k < count; ++k) {
    ParticleInit p;
    p.uid = static_cast<Uid>(k);
    p.radius = kSmallRadius;

    bool placed = false;
    for (int attempt = 0; attempt < kMaxPlacementTries && !placed; ++attempt) {
      const double x = random.uniform(lo.x(), hi.x());
      const double y = random.uniform(lo.y(), hi.y());
      const double z = random.uniform(lo.z(), hi.z());
      p.position = Vec3(x, y, z);
      placed = true;
      for (const auto& other : particles) {
        if ((p.position - other.position).norm() < p.radius + other.radius) {
          placed = false;
          break;
        }
      }
    }
    if (!placed)
      throw ConfigError("could not place " + std::to_string(count) +
                        " non-overlapping particles; box too crowded");

    if (maxSpeed > 0.0) {
      const double vx = random.uniform(-maxSpeed, maxSpeed);
      const double vy = random.uniform(-maxSpeed, maxSpeed);
      const double vz = random.uniform(-maxSpeed, maxSpeed);
      p.velocity = Vec3(vx, vy, vz);
    }
    particles.push_back(p);
  }
  return particles;
}

}  // namespace

std::vector<ParticleInit> buildScenario(const SimConfig& config) {
  const domain::AABB& box = config.globalBox;
  switch (config.scenario.kind) {
    case ScenarioSpec::Kind::TwoSphere:
      return twoSphere(config);
    case ScenarioSpec::Kind::Gas: {
      const Vec3 lo = box.min.array() + kSmallRadius;
      const Vec3 hi = box.max.array() - kSmallRadius;
      return sampled(config, lo, hi, config.scenario.maxSpeed);
    }
    case ScenarioSpec::Kind::Settle: {
      // rain from the upper half, at rest
      const Vec3 lo(box.min.x() + kSmallRadius, box.min.y() + kSmallRadius,
                    box.center().z());
      const Vec3 hi = box.max.array() - kSmallRadius;
      return sampled(config, lo, hi, 0.0);
    }
  }
  throw ConfigError("unknown scenario");
}

}  // namespace granule::app
