#pragma once

#include <array>

#include <Eigen/Core>

#include "spincam/annotation.hpp"
#include "spincam/downwash.hpp"
#include "spincam/geometry.hpp"

namespace spincam {

inline constexpr double kGravity = 9.81;

using Mat44 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;

/// Rigid-body and actuation parameters of a quadrotor. Motor commands are
/// squared rotor speeds in (krad/s)^2, so forces come out in newtons with
/// O(1) command values.
struct QuadrotorParams {
  double mass = 0.034;
  Mat3 inertia = Eigen::Vector3d(16.6e-6, 16.6e-6, 29.3e-6).asDiagonal();
  double kappa_f = 0.02;  // N per (krad/s)^2
  Mat44 actuation = Mat44::Identity();  // wrench = actuation * u
  EllipsoidSpec ellipsoid;
  RobotGeometry geometry;

  /// X-configuration mixer with the given arm length (motor to center) and
  /// drag-to-thrust ratio. Defaults are Crazyflie-class values.
  static QuadrotorParams x_configuration(double arm_length = 0.046, double drag_ratio = 0.006);

  /// Throws InvalidArgument when an invariant does not hold.
  void validate() const;
};

struct Wrench {
  double thrust = 0.0;     // N, along body z
  Vec3 torque = Vec3::Zero();  // N m, body frame

  Vec4 as_vector() const { return {thrust, torque.x(), torque.y(), torque.z()}; }
};

struct MotorCommand {
  std::array<double, 4> u{};  // squared rotor speeds

  double sum() const { return u[0] + u[1] + u[2] + u[3]; }
};

struct RigidBodyState {
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Quat R = Quat::Identity();
  Vec3 omega = Vec3::Zero();  // body frame

  double kinetic_energy(const QuadrotorParams& params) const;
};

/// Rotor commands producing `eta`. Throws InfeasibleWrench when a rotor
/// would have to spin backwards.
MotorCommand mix_wrench(const Wrench& eta, const QuadrotorParams& params);

Wrench wrench_from_command(const MotorCommand& u, const QuadrotorParams& params);

/// One classical Runge-Kutta step of the Newton-Euler equations with
/// residual force `f_a` (world frame). dt must lie in (0, 0.01].
RigidBodyState step_dynamics(const RigidBodyState& state, const MotorCommand& u, const Vec3& f_a,
                             double dt, const QuadrotorParams& params);

}  // namespace spincam
