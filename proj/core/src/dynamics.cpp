#include "spincam/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/LU>

#include "spincam/errors.hpp"

namespace spincam {

QuadrotorParams QuadrotorParams::x_configuration(double arm_length, double drag_ratio) {
  QuadrotorParams p;
  const double k = p.kappa_f;
  const double l = arm_length / std::numbers::sqrt2;
  // Motors: front-right, back-right, back-left, front-left.
  const std::array<double, 4> x{l, -l, -l, l};
  const std::array<double, 4> y{-l, -l, l, l};
  const std::array<double, 4> spin{-1.0, 1.0, -1.0, 1.0};
  for (int i = 0; i < 4; ++i) {
    p.actuation(0, i) = k;
    p.actuation(1, i) = k * y[i];
    p.actuation(2, i) = -k * x[i];
    p.actuation(3, i) = k * drag_ratio * spin[i];
  }
  return p;
}

void QuadrotorParams::validate() const {
  if (!(mass > 0.0)) {
    throw InvalidArgument("mass must be positive");
  }
  if (!inertia.isApprox(inertia.transpose(), 1e-12) || inertia.llt().info() != Eigen::Success) {
    throw InvalidArgument("inertia must be symmetric positive-definite");
  }
  if (!(kappa_f > 0.0)) {
    throw InvalidArgument("thrust coefficient must be positive");
  }
  for (int i = 0; i < 4; ++i) {
    if (actuation(0, i) != kappa_f) {
      throw InvalidArgument("first actuation row must equal kappa_f");
    }
  }
  if (std::abs(actuation.determinant()) < 1e-300 || !Eigen::FullPivLU<Mat44>(actuation).isInvertible()) {
    throw InvalidArgument("actuation matrix must be invertible");
  }
  ellipsoid.validate();
  geometry.validate();
}

double RigidBodyState::kinetic_energy(const QuadrotorParams& params) const {
  return 0.5 * params.mass * v.squaredNorm() + 0.5 * omega.dot(params.inertia * omega);
}

MotorCommand mix_wrench(const Wrench& eta, const QuadrotorParams& params) {
  // Row equilibration: the thrust and torque rows differ by orders of
  // magnitude, and the scaled system is close to orthogonal.
  const Vec4 row_scale = params.actuation.cwiseAbs().rowwise().maxCoeff().cwiseInverse();
  const Mat44 scaled = row_scale.asDiagonal() * params.actuation;
  const Vec4 u = scaled.fullPivLu().solve(row_scale.cwiseProduct(eta.as_vector()));
  const double scale = std::max(1.0, u.cwiseAbs().maxCoeff());
  MotorCommand cmd;
  for (int i = 0; i < 4; ++i) {
    if (u(i) < -1e-12 * scale) {
      throw InfeasibleWrench("rotor " + std::to_string(i) + " would need a negative squared speed");
    }
    cmd.u[static_cast<std::size_t>(i)] = std::max(u(i), 0.0);
  }
  return cmd;
}

Wrench wrench_from_command(const MotorCommand& u, const QuadrotorParams& params) {
  const Vec4 eta = params.actuation * Vec4(u.u[0], u.u[1], u.u[2], u.u[3]);
  return {eta(0), Vec3(eta(1), eta(2), eta(3))};
}

namespace {

struct Derivative {
  Vec3 dp;
  Vec3 dv;
  Eigen::Vector4d dq;  // (w, x, y, z)
  Vec3 domega;
};

Derivative derivative(const RigidBodyState& s, const Wrench& w, const Vec3& f_a, const QuadrotorParams& params) {
  Derivative d;
  d.dp = s.v;
  const Vec3 thrust_world = s.R * Vec3(0.0, 0.0, w.thrust);
  d.dv = Vec3(0.0, 0.0, -kGravity) + (thrust_world + f_a) / params.mass;
  // q_dot = 0.5 q * (0, omega)
  const Quat qdot(0.0, s.omega.x(), s.omega.y(), s.omega.z());
  const Quat prod = s.R * qdot;
  d.dq = 0.5 * Eigen::Vector4d(prod.w(), prod.x(), prod.y(), prod.z());
  const Vec3 jw = params.inertia * s.omega;
  d.domega = params.inertia.ldlt().solve(jw.cross(s.omega) + w.torque);
  return d;
}

RigidBodyState advance(const RigidBodyState& s, const Derivative& d, double h) {
  RigidBodyState out;
  out.p = s.p + h * d.dp;
  out.v = s.v + h * d.dv;
  out.R = Quat(s.R.w() + h * d.dq(0), s.R.x() + h * d.dq(1), s.R.y() + h * d.dq(2), s.R.z() + h * d.dq(3));
  out.omega = s.omega + h * d.domega;
  return out;
}

}  // namespace

RigidBodyState step_dynamics(const RigidBodyState& state, const MotorCommand& u, const Vec3& f_a,
                             double dt, const QuadrotorParams& params) {
  if (!(dt > 0.0 && dt <= 0.01)) {
    throw InvalidArgument("integration step must lie in (0, 0.01] s");
  }
  const Wrench w = wrench_from_command(u, params);
  const Derivative k1 = derivative(state, w, f_a, params);
  const Derivative k2 = derivative(advance(state, k1, dt / 2.0), w, f_a, params);
  const Derivative k3 = derivative(advance(state, k2, dt / 2.0), w, f_a, params);
  const Derivative k4 = derivative(advance(state, k3, dt), w, f_a, params);

  Derivative sum;
  sum.dp = (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp) / 6.0;
  sum.dv = (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv) / 6.0;
  sum.dq = (k1.dq + 2.0 * k2.dq + 2.0 * k3.dq + k4.dq) / 6.0;
  sum.domega = (k1.domega + 2.0 * k2.domega + 2.0 * k3.domega + k4.domega) / 6.0;

  RigidBodyState next = advance(state, sum, dt);
  next.R.normalize();
  return next;
}

}  // namespace spincam
