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

/// \file sensors.h
///
/// Synthetic geolocation models used as fitting targets: a projective
/// (pinhole) camera, a simplified pushbroom scanner, and an RPC composed
/// with a rigid correction around an approximate camera center.

#ifndef RPCFIT_SENSORS_H
#define RPCFIT_SENSORS_H

#include <rpcfit/geolocation.h>
#include <rpcfit/grid.h>
#include <rpcfit/rpc_model.h>

#include <Eigen/Core>

#include <optional>

namespace rpcfit {

  using Matrix34 = Eigen::Matrix<double, 3, 4>;

  inline constexpr double kEarthRadius = 6378137.0;   // meters, WGS84 semi-major axis

  /// Local Cartesian frame (east, north, up) in meters, by equirectangular
  /// scaling about (lon0, lat0). Meters per degree are fixed at lat0.
  class LocalFrame {
  public:
    LocalFrame() : LocalFrame(0.0, 0.0) {}
    LocalFrame(double lon0, double lat0);

    static LocalFrame centered_on(GridBounds const& b);

    Eigen::Vector3d to_local(GroundPoint const& p) const;
    GroundPoint to_ground(Eigen::Vector3d const& enu) const;

    double lon0() const { return m_lon0; }
    double lat0() const { return m_lat0; }

  private:
    double m_lon0, m_lat0;
    double m_east_per_deg, m_north_per_deg;
  };

  /// WGS84 geodetic (degrees, meters) to Earth-centered Earth-fixed meters.
  Eigen::Vector3d geodetic_to_ecef(GroundPoint const& p);

  /// Rotation matrix for an axis-angle vector (radians).
  Eigen::Matrix3d rotation_from_axis_angle(Eigen::Vector3d const& w);

  class PinholeSensor : public GeolocationModel {
  public:
    /// `P` maps homogeneous local coordinates (e, n, u, 1) to
    /// (row * w, col * w, w). Throws std::invalid_argument if P does not
    /// have rank 3, or if `bounds` is given and the principal plane
    /// (w = 0) touches it.
    PinholeSensor(Matrix34 P, LocalFrame frame, std::optional<GridBounds> bounds = {});

    /// Camera at `center` (local meters) looking down, rows toward south and
    /// columns toward east, with an extra small attitude rotation.
    static PinholeSensor looking_down(LocalFrame frame, Eigen::Vector3d const& center,
                                      double focal_px, ImagePoint principal,
                                      Eigen::Vector3d const& attitude = Eigen::Vector3d::Zero(),
                                      std::optional<GridBounds> bounds = {});

    ImagePoint project(GroundPoint const& p) const override;

    Matrix34 const& matrix() const { return m_P; }
    LocalFrame const& frame() const { return m_frame; }
    std::optional<GridBounds> const& bounds() const { return m_bounds; }

    /// Camera center in local coordinates (null space of P).
    Eigen::Vector3d center() const;

  private:
    Matrix34 m_P;
    LocalFrame m_frame;
    std::optional<GridBounds> m_bounds;
  };

  struct PushbroomParams {
    Eigen::Vector3d position = Eigen::Vector3d::Zero();   // ECEF meters at t = 0
    Eigen::Vector3d velocity = Eigen::Vector3d::Zero();   // ECEF meters / second
    double line_period = 1e-4;                             // seconds per row
    double focal_ratio = 1e6;                              // focal length / detector pitch
    double col_center = 0.0;                               // column of the boresight
    Eigen::Vector3d attitude = Eigen::Vector3d::Zero();   // axis-angle, radians
    int num_lines = 0;                                     // 0: no limit on rows
  };

  /// Linear detector array moving along a straight orbit at constant
  /// velocity. The camera frame at t = 0 has x along the velocity, z toward
  /// the geocentric nadir, y = z x x, and is rotated by the attitude. A
  /// ground point is imaged at the time it crosses the plane x = 0 of the
  /// moving camera: row = t / line_period, and the column is the
  /// across-track perspective ratio col_center + focal_ratio * y / z.
  class PushbroomSensor : public GeolocationModel {
  public:
    explicit PushbroomSensor(PushbroomParams params, std::optional<GridBounds> bounds = {});

    /// A northbound pass centered over `scene` at `orbit_height` meters
    /// with ground sample distance `gsd` meters. The pass start and the
    /// boresight column are chosen so the whole scene is imaged with a 10%
    /// margin.
    static PushbroomSensor over_scene(GridBounds const& scene, double orbit_height = 600e3,
                                      double gsd = 0.5, double speed = 7500.0,
                                      Eigen::Vector3d const& attitude = Eigen::Vector3d::Zero());

    ImagePoint project(GroundPoint const& p) const override;

    PushbroomParams const& params() const { return m_params; }
    std::optional<GridBounds> const& bounds() const { return m_bounds; }

  private:
    PushbroomParams m_params;
    std::optional<GridBounds> m_bounds;
    Eigen::Vector3d m_x, m_y, m_z;   // camera axes in ECEF
  };

  /// X -> R (X - T - C) + C in local Cartesian coordinates.
  struct RigidCorrection {
    Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
    Eigen::Vector3d T = Eigen::Vector3d::Zero();
    Eigen::Vector3d C = Eigen::Vector3d::Zero();

    Eigen::Vector3d apply(Eigen::Vector3d const& x) const { return R * (x - T - C) + C; }

    /// The correction undoing this one: (R', -R T, C).
    RigidCorrection inverse() const;

    /// Throws std::invalid_argument unless R is orthonormal with det 1.
    void validate(double tol = 1e-9) const;
  };

  class CorrectedRpcSensor : public GeolocationModel {
  public:
    /// The frame defaults to the horizontal center of the base model.
    CorrectedRpcSensor(RpcModel base, RigidCorrection correction);
    CorrectedRpcSensor(RpcModel base, RigidCorrection correction, LocalFrame frame);

    ImagePoint project(GroundPoint const& p) const override;

    /// The ground point handed to the base model.
    GroundPoint corrected(GroundPoint const& p) const;

    RpcModel const& base() const { return m_base; }
    RigidCorrection const& correction() const { return m_correction; }
    LocalFrame const& frame() const { return m_frame; }

  private:
    RpcModel m_base;
    RigidCorrection m_correction;
    LocalFrame m_frame;
  };

  struct CameraCenterOptions {
    int n_lonlat = 10;
    int n_alt = 5;
    double rank_tolerance = 1e-8;   // relative, on the DLT singular values
  };

  /// Approximate camera center of an RPC by fitting a 3x4 projective camera
  /// to samples of it (normalized DLT). Returned in `frame` coordinates, or
  /// in the frame centered on `bounds` by default. Throws DegenerateFit when
  /// the samples do not determine a camera (e.g. coplanar ground points).
  Eigen::Vector3d estimate_camera_center(RpcModel const& m, GridBounds const& bounds,
                                         std::optional<LocalFrame> frame = {},
                                         CameraCenterOptions const& opts = {});

  /// Normalized DLT on explicit correspondences (local meters to pixels).
  Matrix34 fit_projective_camera(std::span<Eigen::Vector3d const> world,
                                 std::span<ImagePoint const> image,
                                 double rank_tolerance = 1e-8);

} // namespace rpcfit

#endif // RPCFIT_SENSORS_H
