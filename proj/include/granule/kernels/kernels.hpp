// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>

#include "granule/core/error.hpp"
#include "granule/core/log.hpp"
#include "granule/core/types.hpp"
#include "granule/domain/aabb.hpp"

namespace granule::kernels {

// Per-particle and pair kernels. Every particle access goes through the
// accessor passed in, never through a concrete store type, so any data
// structure with the matching get/set surface works (the generated accessor,
// adapters, mocks). Kernels write nothing but the properties named in their
// contracts.
//
// invMass is the stored quantity; invMass == 0 encodes an immovable
// particle: gravity skips it and the integrators reduce to pure velocity
// drift (zero for resting particles).

struct KernelParams {
  double dt = 1e-3;           ///< time step
  Vec3 gravity = Vec3::Zero();///< acceleration
  double kn = 0.0;            ///< normal stiffness, force/length
  double gammaN = 0.0;        ///< normal damping, force*time/length

  void validate() const {
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (kn < 0.0) throw ConfigError("kn must be non-negative");
    if (gammaN < 0.0) throw ConfigError("gamma_n must be non-negative");
  }
};

/// Explicit Euler step; the position update reads the pre-update velocity
/// and the force is consumed (reset to zero).
template <class Accessor>
inline void explicitEuler(std::size_t idx, Accessor& ac, double dt) {
  ac.setPosition(idx, ac.getInvMass(idx) * ac.getForce(idx) * dt * dt +
                          ac.getLinearVelocity(idx) * dt +
                          ac.getPosition(idx));
  ac.setLinearVelocity(idx, ac.getInvMass(idx) * ac.getForce(idx) * dt +
                                ac.getLinearVelocity(idx));
  ac.setForce(idx, Vec3(0, 0, 0));
}

/// Velocity Verlet, position half: x += v*dt + (1/2m)*oldF*dt^2.
/// Runs before synchronization so ghosts carry post-move positions.
template <class Accessor>
inline void velocityVerletPre(std::size_t idx, Accessor& ac, double dt) {
  ac.setPosition(idx, ac.getPosition(idx) + ac.getLinearVelocity(idx) * dt +
                          0.5 * ac.getInvMass(idx) * ac.getOldForce(idx) * dt *
                              dt);
}

/// Velocity Verlet, velocity half: v += (1/2m)*(oldF + F)*dt; then the
/// just-used force is archived into oldForce and reset.
template <class Accessor>
inline void velocityVerletPost(std::size_t idx, Accessor& ac, double dt) {
  ac.setLinearVelocity(
      idx, ac.getLinearVelocity(idx) +
               0.5 * ac.getInvMass(idx) *
                   (ac.getOldForce(idx) + ac.getForce(idx)) * dt);
  ac.setOldForce(idx, ac.getForce(idx));
  ac.setForce(idx, Vec3(0, 0, 0));
}

/// Adds the weight m*g (= g / invMass); immovable particles are skipped.
template <class Accessor>
inline void applyGravity(std::size_t idx, Accessor& ac, const Vec3& g) {
  const double invMass = ac.getInvMass(idx);
  if (invMass > 0.0) ac.setForce(idx, ac.getForce(idx) + g / invMass);
}

/// Linear spring-dashpot normal contact between spheres i and j. No-op
/// without overlap. Writes equal and opposite forces to both sides; when one
/// side is a ghost the write lands on the local copy and stays local (force
/// is never synchronized).
template <class Accessor>
inline void springDashpot(std::size_t i, std::size_t j, Accessor& ac,
                          double kn, double gammaN) {
  const Vec3 delta = ac.getPosition(i) - ac.getPosition(j);
  const double distance = delta.norm();
  if (distance == 0.0) {
    logEvent("coincident centers of particles at indices " + std::to_string(i) +
             " and " + std::to_string(j) + "; contact skipped");
    return;
  }
  const double overlap =
      ac.getInteractionRadius(i) + ac.getInteractionRadius(j) - distance;
  if (overlap <= 0.0) return;

  const Vec3 normal = delta / distance;
  const double approachSpeed =
      (ac.getLinearVelocity(i) - ac.getLinearVelocity(j)).dot(normal);
  const Vec3 force = (kn * overlap - gammaN * approachSpeed) * normal;
  ac.setForce(i, ac.getForce(i) + force);
  ac.setForce(j, ac.getForce(j) - force);
}

/// Elastic containment against the six faces of `box`: every face penetrated
/// by the sphere pushes back with kn * penetration along the inward normal.
/// Touching exactly (zero penetration) exerts no force.
template <class Accessor>
inline void wallBox(std::size_t idx, Accessor& ac, const domain::AABB& box,
                    double kn) {
  const Vec3 p = ac.getPosition(idx);
  const double r = ac.getInteractionRadius(idx);
  Vec3 force = ac.getForce(idx);
  for (int axis = 0; axis < 3; ++axis) {
    const double lowPenetration = r - (p[axis] - box.min[axis]);
    if (lowPenetration > 0.0) force[axis] += kn * lowPenetration;
    const double highPenetration = r - (box.max[axis] - p[axis]);
    if (highPenetration > 0.0) force[axis] -= kn * highPenetration;
  }
  ac.setForce(idx, force);
}

}  // namespace granule::kernels
