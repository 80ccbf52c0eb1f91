// __BEGIN_LICENSE__
//  Licensed under the Apache License, Version 2.0 (the "License"); you may
//  not use this file except in compliance with the License. You may obtain a
//  copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.
// __END_LICENSE__

#include "oracles.h"

#include <rpcfit/error.h>
#include <rpcfit/fit.h>
#include <rpcfit/grid.h>
#include <rpcfit/sensors.h>

#include <gtest/gtest.h>

#include <limits>
#include <numbers>
#include <random>

using namespace rpcfit;

namespace {

  GridBounds const kScene{2.25, 2.45, 48.75, 48.95, -500.0, 500.0};
  double const kD2R = std::numbers::pi / 180.0;

  PinholeSensor scene_camera() {
    return PinholeSensor::looking_down(LocalFrame::centered_on(kScene), {2000, -3000, 600e3},
                                       1.2e6, {20000, 20000}, {1e-3, -2e-3, 5e-4}, kScene);
  }

  RpcModel rpc_of(GeolocationModel const& s, GridBounds const& b, int n = 15, int n_alt = 6) {
    return fit_rpc(build_correspondences(s, generate_cnp_grid({b, n, n_alt}))).model;
  }

} // namespace

TEST(LocalFrame, RoundTripAndScale) {
  LocalFrame const f(2.35, 48.85);
  Eigen::Vector3d const e = f.to_local({2.36, 48.86, 12.0});
  EXPECT_NEAR(e.x(), 6378137.0 * std::cos(48.85 * kD2R) * 0.01 * kD2R, 1e-6);
  EXPECT_NEAR(e.y(), 6378137.0 * 0.01 * kD2R, 1e-6);
  EXPECT_EQ(e.z(), 12.0);
  GroundPoint const back = f.to_ground(e);
  EXPECT_NEAR(back.lon, 2.36, 1e-13);
  EXPECT_NEAR(back.lat, 48.86, 1e-13);
}

TEST(Ecef, FrozenReferenceValues) {
  // Evaluated with 40-digit arithmetic.
  Eigen::Vector3d const p = geodetic_to_ecef({2.35, 48.85, 35.0});
  EXPECT_NEAR(p.x(), 4201496.6614117391398, 1e-7);
  EXPECT_NEAR(p.y(), 172422.07960395586715, 1e-7);
  EXPECT_NEAR(p.z(), 4779624.7551975918161, 1e-7);
  Eigen::Vector3d const pole = geodetic_to_ecef({0.0, 90.0, 0.0});
  EXPECT_NEAR(pole.x(), 0.0, 1e-7);
  EXPECT_NEAR(pole.z(), 6356752.3142451794976, 1e-7);
  EXPECT_NEAR(geodetic_to_ecef({0.0, 0.0, 0.0}).x(), 6378137.0, 1e-9);
}

TEST(Rotation, AxisAngleIsOrthonormal) {
  Eigen::Matrix3d const R = rotation_from_axis_angle({1e-3, -2e-3, 5e-4});
  EXPECT_LE(((R.transpose() * R) - Eigen::Matrix3d::Identity()).norm(), 1e-15);
  EXPECT_NEAR(R.determinant(), 1.0, 1e-15);
  EXPECT_EQ(rotation_from_axis_angle(Eigen::Vector3d::Zero()), Eigen::Matrix3d::Identity());
  Eigen::Matrix3d const Rz = rotation_from_axis_angle({0, 0, std::numbers::pi / 2});
  EXPECT_NEAR((Rz * Eigen::Vector3d::UnitX() - Eigen::Vector3d::UnitY()).norm(), 0.0, 1e-15);
}

TEST(Pinhole, MatchesHomogeneousOracle) {
  PinholeSensor const cam = scene_camera();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    GroundPoint const g{2.25 + 0.2 * u(rng), 48.75 + 0.2 * u(rng), -500 + 1000 * u(rng)};
    ImagePoint const a = cam.project(g);
    ImagePoint const b = oracle::pinhole(cam.matrix(), 2.35, 48.85, g);
    EXPECT_NEAR(a.row, b.row, 1e-12 * std::abs(b.row));
    EXPECT_NEAR(a.col, b.col, 1e-12 * std::abs(b.col));
  }
}

TEST(Pinhole, LookingDownOrientation) {
  LocalFrame const f(2.35, 48.85);
  PinholeSensor const cam = PinholeSensor::looking_down(f, {0, 0, 1000}, 1000.0, {500, 600});
  ImagePoint const c = cam.project({2.35, 48.85, 0.0});
  EXPECT_NEAR(c.row, 500.0, 1e-9);
  EXPECT_NEAR(c.col, 600.0, 1e-9);
  GroundPoint const east = f.to_ground({10.0, 0.0, 0.0});
  GroundPoint const north = f.to_ground({0.0, 10.0, 0.0});
  EXPECT_NEAR(cam.project(east).col, 610.0, 1e-9);
  EXPECT_NEAR(cam.project(north).row, 490.0, 1e-9);
  EXPECT_NEAR((cam.center() - Eigen::Vector3d(0, 0, 1000)).norm(), 0.0, 1e-6);
}

TEST(Pinhole, Errors) {
  LocalFrame const f(2.35, 48.85);
  Matrix34 P = Matrix34::Zero();
  P(0, 0) = 1.0;
  EXPECT_THROW(PinholeSensor(P, f), std::invalid_argument);

  PinholeSensor const cam = PinholeSensor::looking_down(f, {0, 0, 1000}, 1000.0, {500, 600});
  EXPECT_THROW(cam.project({2.35, 48.85, 2000.0}), BehindCamera);

  GridBounds tall = kScene;
  tall.alt_max = 1500.0;
  EXPECT_THROW(PinholeSensor(cam.matrix(), f, tall), std::invalid_argument);

  PinholeSensor const bounded = scene_camera();
  EXPECT_THROW(bounded.project({2.5, 48.85, 0.0}), OutOfBounds);
}

TEST(Pushbroom, NadirGroundTrackHasFixedColumn) {
  // Equatorial pass heading north: camera x = ECEF z, nadir = -ECEF x,
  // across-track = +ECEF y. Points on the meridian of the orbit have
  // ECEF y = 0 and therefore image at the boresight column, at the line
  // where the orbit crosses their ECEF z.
  double const h = 600e3, v = 7500.0, period = 1e-4, f = 1.2e6;
  PushbroomParams p;
  p.position = {6378137.0 + h, 0.0, 0.0};
  p.velocity = {0.0, 0.0, v};
  p.line_period = period;
  p.focal_ratio = f;
  p.col_center = 1234.5;
  PushbroomSensor const s(p);
  double const a = 6378137.0, fl = 1.0 / 298.257223563, e2 = fl * (2.0 - fl);
  for (double lat : {-0.1, 0.0, 0.05, 0.2}) {
    for (double alt : {0.0, 300.0}) {
      double const phi = lat * kD2R;
      double const n = a / std::sqrt(1.0 - e2 * std::sin(phi) * std::sin(phi));
      double const z = (n * (1.0 - e2) + alt) * std::sin(phi);
      ImagePoint const px = s.project({0.0, lat, alt});
      EXPECT_NEAR(px.col, 1234.5, 1e-9);
      EXPECT_NEAR(px.row, z / v / period, 1e-6);
    }
  }
  // Off the meridian: column from the across-track ratio.
  double const lon = 0.01, phi = 0.0;
  double const xe = a * std::cos(phi) * std::cos(lon * kD2R);
  double const ye = a * std::cos(phi) * std::sin(lon * kD2R);
  EXPECT_NEAR(s.project({lon, 0.0, 0.0}).col, 1234.5 + f * ye / (a + h - xe), 1e-6);
}

TEST(Pushbroom, OverSceneImagesWholeScene) {
  PushbroomSensor const s = PushbroomSensor::over_scene(kScene, 600e3, 0.5, 7500, {2e-3, -1e-3, 3e-3});
  int const lines = s.params().num_lines;
  ASSERT_GT(lines, 0);
  for (GroundPoint const& g : generate_cnp_grid({kScene, 12, 3})) {
    ImagePoint const px = s.project(g);
    EXPECT_GT(px.row, 0.0);
    EXPECT_LT(px.row, lines);
    EXPECT_GT(px.col, 0.0);
  }
  // Roughly 0.2 degrees of latitude at 0.5 m per line.
  EXPECT_NEAR(lines, 0.2 * kD2R * 6378137.0 / 0.5 * 1.2, 0.1 * lines);
}

TEST(Pushbroom, Errors) {
  PushbroomParams p;
  EXPECT_THROW(PushbroomSensor{p}, std::invalid_argument);
  PushbroomSensor const s = PushbroomSensor::over_scene(kScene);
  EXPECT_THROW(s.project({2.35, 49.5, 0.0}), OutOfBounds);
  PushbroomParams q = s.params();
  PushbroomSensor const unbounded(q);
  EXPECT_THROW(unbounded.project({2.35, 49.5, 0.0}), NoAcquisition);
  EXPECT_THROW(unbounded.project({182.35, -48.85, 0.0}), NoAcquisition);
}

TEST(CorrectedRpc, IdentityCorrectionReproducesBase) {
  std::mt19937_64 rng(1);
  RpcModel const base = oracle::random_rpc(rng, oracle::paris_norm());
  CorrectedRpcSensor const s(base, RigidCorrection{});
  for (GroundPoint const& g : generate_cnp_grid({kScene, 6, 3})) {
    ImagePoint const a = s.project(g), b = base.project(g);
    EXPECT_EQ(a.row, b.row);
    EXPECT_EQ(a.col, b.col);
  }
}

TEST(CorrectedRpc, InverseCorrectionComposesToBase) {
  std::mt19937_64 rng(2);
  RpcModel const base = oracle::random_rpc(rng, oracle::paris_norm());
  RigidCorrection c;
  c.R = rotation_from_axis_angle({1e-3, -5e-4, 8e-4});
  c.T = {5.0, -3.0, 2.0};
  c.C = {1500.0, -800.0, 600e3};
  CorrectedRpcSensor const fwd(base, c), inv(base, c.inverse());
  // Intermediate coordinates are of magnitude |C|, which sets the rounding floor.
  double const tol = 16 * std::numeric_limits<double>::epsilon() * c.C.norm();
  for (GroundPoint const& g : generate_cnp_grid({kScene, 5, 3})) {
    GroundPoint const back = inv.corrected(fwd.corrected(g));
    EXPECT_LE((fwd.frame().to_local(back) - fwd.frame().to_local(g)).norm(), tol);
  }
}

TEST(CorrectedRpc, CorrectionInLocalFrame) {
  std::mt19937_64 rng(3);
  RpcModel const base = oracle::random_rpc(rng, oracle::paris_norm());
  RigidCorrection c;
  c.T = {10.0, 0.0, -4.0};
  CorrectedRpcSensor const s(base, c);
  GroundPoint const g{2.36, 48.84, 50.0};
  GroundPoint const q = s.corrected(g);
  LocalFrame const f(2.35, 48.85);
  EXPECT_NEAR((f.to_local(q) - f.to_local(g) + Eigen::Vector3d(10.0, 0.0, -4.0)).norm(), 0.0, 1e-6);
}

TEST(CorrectedRpc, RejectsNonRotation) {
  RigidCorrection c;
  c.R(0, 0) = 2.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.R = -Eigen::Matrix3d::Identity();
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(ProjectiveFit, RecoversPinholeMatrix) {
  PinholeSensor const cam = scene_camera();
  LocalFrame const f = LocalFrame::centered_on(kScene);
  std::vector<Eigen::Vector3d> world;
  std::vector<ImagePoint> image;
  for (GroundPoint const& g : generate_cnp_grid({kScene, 5, 3})) {
    world.push_back(f.to_local(g));
    image.push_back(cam.project(g));
  }
  Matrix34 const P = fit_projective_camera(world, image);
  Matrix34 const a = P / P.norm() * (P(2, 3) > 0 ? 1 : -1);
  Matrix34 const b = cam.matrix() / cam.matrix().norm() * (cam.matrix()(2, 3) > 0 ? 1 : -1);
  EXPECT_LE((a - b).norm(), 1e-9);
}

TEST(ProjectiveFit, CoplanarPointsAreDegenerate) {
  std::vector<Eigen::Vector3d> world;
  std::vector<ImagePoint> image;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      world.emplace_back(100.0 * i, 100.0 * j, 0.0);
      image.push_back({10.0 * i + 0.1 * j, 10.0 * j});
    }
  EXPECT_THROW(fit_projective_camera(world, image), DegenerateFit);
}

TEST(CameraCenter, RecoversPinholeCenterThroughRpc) {
  PinholeSensor const cam = scene_camera();
  RpcModel const rpc = rpc_of(cam, kScene);
  Eigen::Vector3d const c = estimate_camera_center(rpc, kScene);
  double const distance = cam.center().norm();
  EXPECT_LE((c - cam.center()).norm(), 1e-3 * distance);
}

TEST(CameraCenter, InvariantToImageOffsets) {
  RpcModel const rpc = rpc_of(scene_camera(), kScene);
  NormalizationParams n = rpc.norm();
  n.row.offset += 321.0;
  n.col.offset -= 77.0;
  Eigen::Vector3d const a = estimate_camera_center(rpc, kScene);
  Eigen::Vector3d const b = estimate_camera_center(rpc.with_norm(n), kScene);
  EXPECT_LE((a - b).norm(), 1e-6 * a.norm());
}

TEST(CameraCenter, FlatBoundsAreDegenerate) {
  RpcModel const rpc = rpc_of(scene_camera(), kScene);
  GridBounds flat = kScene;
  flat.alt_min = flat.alt_max = 0.0;
  EXPECT_THROW(estimate_camera_center(rpc, flat), DegenerateFit);
}
