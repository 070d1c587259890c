#include "spincam/extrinsic.hpp"

#include <cmath>
#include <limits>

#include "spincam/errors.hpp"

namespace spincam {

std::size_t AxisRange::count() const {
  if (!(step > 0.0) || !(max >= min)) {
    throw InvalidArgument("rotation grid axis needs step > 0 and max >= min");
  }
  return static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
}

RigidTransform perturb_extrinsic(const RigidTransform& robot_to_camera, const Vec3& perturbation) {
  RigidTransform out = robot_to_camera;
  out.rotation = (rotation_from_vector(perturbation) * robot_to_camera.rotation).normalized();
  return out;
}

namespace {

struct Correspondence {
  Vec3 in_body;  // neighbor origin in the ego body frame
  ImagePoint observed;
};

std::vector<Correspondence> collect(const std::vector<ExtrinsicFrame>& frames) {
  std::vector<Correspondence> out;
  for (const auto& f : frames) {
    const RigidTransform world_to_body = f.ego.robot_to_world.inverse();
    for (const auto& obs : f.observations) {
      out.push_back({world_to_body.apply(obs.neighbor.position()), obs.observed_center});
    }
  }
  return out;
}

double objective(const std::vector<Correspondence>& corr, const RigidTransform& robot_to_camera,
                 const CameraIntrinsics& intr) {
  const double penalty = static_cast<double>(intr.width) * intr.width +
                         static_cast<double>(intr.height) * intr.height;
  double sum = 0.0;
  for (const auto& c : corr) {
    const Vec3 p = robot_to_camera.apply(c.in_body);
    if (!(p.z() > 0.0)) {
      sum += penalty;
      continue;
    }
    const ImagePoint q = project(p, intr);
    const double du = q.u - c.observed.u;
    const double dv = q.v - c.observed.v;
    sum += du * du + dv * dv;
  }
  return sum / static_cast<double>(corr.size());
}

}  // namespace

double reprojection_objective(const std::vector<ExtrinsicFrame>& frames, const CameraModel& camera) {
  const auto corr = collect(frames);
  if (corr.empty()) {
    throw NoObservations();
  }
  return objective(corr, camera.robot_to_camera, camera.intrinsics);
}

ExtrinsicRefinement refine_extrinsic_rotation(const std::vector<ExtrinsicFrame>& frames,
                                              const CameraModel& camera, const RotationGrid& grid) {
  const auto corr = collect(frames);
  if (corr.empty()) {
    throw NoObservations();
  }
  const std::size_t nx = grid.x.count();
  const std::size_t ny = grid.y.count();
  const std::size_t nz = grid.z.count();

  ExtrinsicRefinement best;
  best.objective = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t k = 0; k < nz; ++k) {
        const Vec3 delta(grid.x.value(i), grid.y.value(j), grid.z.value(k));
        const RigidTransform candidate = perturb_extrinsic(camera.robot_to_camera, delta);
        const double value = objective(corr, candidate, camera.intrinsics);
        ++best.evaluated;
        if (value < best.objective) {
          best.objective = value;
          best.perturbation = delta;
          best.robot_to_camera = candidate;
        }
      }
    }
  }
  return best;
}

}  // namespace spincam
