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

#include <rpcfit/sensors.h>
#include <rpcfit/error.h>

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace rpcfit {

  namespace {

    constexpr double kDegToRad = std::numbers::pi / 180.0;

    std::string describe(GroundPoint const& p) {
      return "(" + std::to_string(p.lon) + ", " + std::to_string(p.lat) + ", " +
             std::to_string(p.alt) + ")";
    }

    void check_bounds(std::optional<GridBounds> const& bounds, GroundPoint const& p) {
      if (bounds && !bounds->contains(p))
        throw OutOfBounds("point " + describe(p) + " outside sensor bounds");
    }

  } // namespace

  LocalFrame::LocalFrame(double lon0, double lat0)
    : m_lon0(lon0), m_lat0(lat0),
      m_east_per_deg(kEarthRadius * kDegToRad * std::cos(lat0 * kDegToRad)),
      m_north_per_deg(kEarthRadius * kDegToRad) {}

  LocalFrame LocalFrame::centered_on(GridBounds const& b) {
    return LocalFrame(0.5 * (b.lon_min + b.lon_max), 0.5 * (b.lat_min + b.lat_max));
  }

  Eigen::Vector3d LocalFrame::to_local(GroundPoint const& p) const {
    return {(p.lon - m_lon0) * m_east_per_deg, (p.lat - m_lat0) * m_north_per_deg, p.alt};
  }

  GroundPoint LocalFrame::to_ground(Eigen::Vector3d const& enu) const {
    return {m_lon0 + enu.x() / m_east_per_deg, m_lat0 + enu.y() / m_north_per_deg, enu.z()};
  }

  Eigen::Vector3d geodetic_to_ecef(GroundPoint const& p) {
    constexpr double a = kEarthRadius;
    constexpr double f = 1.0 / 298.257223563;
    constexpr double e2 = f * (2.0 - f);
    double const lon = p.lon * kDegToRad, lat = p.lat * kDegToRad;
    double const s = std::sin(lat), c = std::cos(lat);
    double const n = a / std::sqrt(1.0 - e2 * s * s);
    return {(n + p.alt) * c * std::cos(lon),
            (n + p.alt) * c * std::sin(lon),
            (n * (1.0 - e2) + p.alt) * s};
  }

  Eigen::Matrix3d rotation_from_axis_angle(Eigen::Vector3d const& w) {
    double const angle = w.norm();
    if (angle == 0.0)
      return Eigen::Matrix3d::Identity();
    return Eigen::AngleAxisd(angle, w / angle).toRotationMatrix();
  }

  // ---------------------------------------------------------------------------
  // Pinhole

  PinholeSensor::PinholeSensor(Matrix34 P, LocalFrame frame, std::optional<GridBounds> bounds)
    : m_P(P), m_frame(frame), m_bounds(bounds) {
    if (!m_P.allFinite())
      throw std::invalid_argument("PinholeSensor: non-finite matrix");
    Eigen::JacobiSVD<Matrix34> svd(m_P);
    if (!(svd.singularValues()(2) > 1e-12 * svd.singularValues()(0)))
      throw std::invalid_argument("PinholeSensor: P must have rank 3");

    if (m_bounds) {
      m_bounds->validate();
      GridBounds const& b = *m_bounds;
      for (double lon : {b.lon_min, b.lon_max})
        for (double lat : {b.lat_min, b.lat_max})
          for (double alt : {b.alt_min, b.alt_max}) {
            double const w = m_P.row(2).dot(m_frame.to_local({lon, lat, alt}).homogeneous());
            if (!(w > 0.0))
              throw std::invalid_argument("PinholeSensor: principal plane intersects bounds");
          }
    }
  }

  PinholeSensor PinholeSensor::looking_down(LocalFrame frame, Eigen::Vector3d const& center,
                                            double focal_px, ImagePoint principal,
                                            Eigen::Vector3d const& attitude,
                                            std::optional<GridBounds> bounds) {
    Eigen::Matrix3d axes;
    axes << 0, -1, 0,    // rows toward south
            1, 0, 0,     // columns toward east
            0, 0, -1;    // boresight down
    Eigen::Matrix3d const R = rotation_from_axis_angle(attitude) * axes;
    Eigen::Matrix3d K;
    K << focal_px, 0, principal.row,
         0, focal_px, principal.col,
         0, 0, 1;
    Matrix34 Rt;
    Rt << R, -R * center;
    return PinholeSensor(K * Rt, frame, bounds);
  }

  ImagePoint PinholeSensor::project(GroundPoint const& p) const {
    check_bounds(m_bounds, p);
    Eigen::Vector3d const h = m_P * m_frame.to_local(p).homogeneous();
    if (!(h.z() > 0.0))
      throw BehindCamera("point " + describe(p) + " has depth " + std::to_string(h.z()));
    return {h.x() / h.z(), h.y() / h.z()};
  }

  Eigen::Vector3d PinholeSensor::center() const {
    Eigen::JacobiSVD<Matrix34> svd(m_P, Eigen::ComputeFullV);
    Eigen::Vector4d const c = svd.matrixV().col(3);
    return c.head<3>() / c(3);
  }

  // ---------------------------------------------------------------------------
  // Pushbroom

  PushbroomSensor::PushbroomSensor(PushbroomParams params, std::optional<GridBounds> bounds)
    : m_params(params), m_bounds(bounds) {
    if (!(m_params.velocity.norm() > 0.0))
      throw std::invalid_argument("PushbroomSensor: velocity must be nonzero");
    if (!(m_params.line_period > 0.0) || !(m_params.focal_ratio > 0.0))
      throw std::invalid_argument("PushbroomSensor: line period and focal ratio must be positive");
    if (m_bounds)
      m_bounds->validate();

    Eigen::Vector3d const x = m_params.velocity.normalized();
    Eigen::Vector3d z = -(m_params.position - m_params.position.dot(x) * x);
    if (!(z.norm() > 0.0))
      throw std::invalid_argument("PushbroomSensor: position parallel to velocity");
    z.normalize();
    Eigen::Vector3d const y = z.cross(x);

    Eigen::Matrix3d const att = rotation_from_axis_angle(m_params.attitude);
    m_x = att * x;
    m_y = att * y;
    m_z = att * z;
  }

  PushbroomSensor PushbroomSensor::over_scene(GridBounds const& scene, double orbit_height,
                                              double gsd, double speed,
                                              Eigen::Vector3d const& attitude) {
    scene.validate();
    double const lon_c = 0.5 * (scene.lon_min + scene.lon_max);
    double const lat_c = 0.5 * (scene.lat_min + scene.lat_max);
    double const phi = lat_c * kDegToRad, lam = lon_c * kDegToRad;
    Eigen::Vector3d const north(-std::sin(phi) * std::cos(lam),
                                -std::sin(phi) * std::sin(lam),
                                std::cos(phi));

    double const ground_speed = speed * kEarthRadius / (kEarthRadius + orbit_height);
    double const half_along = 0.5 * (scene.lat_max - scene.lat_min) * kDegToRad * kEarthRadius;

    PushbroomParams p;
    p.velocity = speed * north;
    p.position = geodetic_to_ecef({lon_c, lat_c, orbit_height}) -
                 p.velocity * (half_along / ground_speed);
    p.line_period = gsd / ground_speed;
    p.focal_ratio = orbit_height / gsd;
    p.attitude = attitude;

    // Shift the pass start and the boresight column so that the scene,
    // including attitude-induced offsets, lands inside the image with a
    // margin on every side.
    PushbroomSensor const probe(p);
    double row_lo = std::numeric_limits<double>::infinity(), row_hi = -row_lo;
    double col_lo = row_lo, col_hi = -row_lo;
    for (GroundPoint const& g : generate_cnp_grid({scene, 5, 2})) {
      ImagePoint const px = probe.project(g);
      row_lo = std::min(row_lo, px.row);
      row_hi = std::max(row_hi, px.row);
      col_lo = std::min(col_lo, px.col);
      col_hi = std::max(col_hi, px.col);
    }
    double const row_margin = 0.1 * (row_hi - row_lo) + 10.0;
    double const col_margin = 0.1 * (col_hi - col_lo) + 10.0;
    p.position += p.velocity * p.line_period * (row_lo - row_margin);
    p.col_center += col_margin - col_lo;
    p.num_lines = static_cast<int>(std::ceil(row_hi - row_lo + 2.0 * row_margin));
    return PushbroomSensor(p, scene);
  }

  ImagePoint PushbroomSensor::project(GroundPoint const& p) const {
    check_bounds(m_bounds, p);
    Eigen::Vector3d const d0 = geodetic_to_ecef(p) - m_params.position;
    double const closing = m_x.dot(m_params.velocity);
    if (!(std::abs(closing) > 0.0))
      throw NoAcquisition("sensor plane moves parallel to itself");
    double const t = m_x.dot(d0) / closing;
    Eigen::Vector3d const d = d0 - m_params.velocity * t;
    double const depth = m_z.dot(d);
    if (!(depth > 0.0))
      throw NoAcquisition("point " + describe(p) + " is behind the sensor");
    double const row = t / m_params.line_period;
    if (m_params.num_lines > 0 && (row < 0.0 || row > m_params.num_lines))
      throw NoAcquisition("point " + describe(p) + " imaged at row " + std::to_string(row) +
                          " outside the acquisition");
    return {row, m_params.col_center + m_params.focal_ratio * m_y.dot(d) / depth};
  }

  // ---------------------------------------------------------------------------
  // Corrected RPC

  RigidCorrection RigidCorrection::inverse() const {
    return {R.transpose(), -R * T, C};
  }

  void RigidCorrection::validate(double tol) const {
    if (!R.allFinite() || !T.allFinite() || !C.allFinite())
      throw std::invalid_argument("RigidCorrection: non-finite parameters");
    if (!(R.transpose() * R).isApprox(Eigen::Matrix3d::Identity(), tol) ||
        std::abs(R.determinant() - 1.0) > tol)
      throw std::invalid_argument("RigidCorrection: R must be a rotation");
  }

  CorrectedRpcSensor::CorrectedRpcSensor(RpcModel base, RigidCorrection correction)
    : CorrectedRpcSensor(base, correction,
                         LocalFrame(base.norm().lon.offset, base.norm().lat.offset)) {}

  CorrectedRpcSensor::CorrectedRpcSensor(RpcModel base, RigidCorrection correction,
                                         LocalFrame frame)
    : m_base(std::move(base)), m_correction(correction), m_frame(frame) {
    m_correction.validate();
  }

  GroundPoint CorrectedRpcSensor::corrected(GroundPoint const& p) const {
    return m_frame.to_ground(m_correction.apply(m_frame.to_local(p)));
  }

  ImagePoint CorrectedRpcSensor::project(GroundPoint const& p) const {
    return m_base.project(corrected(p));
  }

  // ---------------------------------------------------------------------------
  // Projective regression

  Matrix34 fit_projective_camera(std::span<Eigen::Vector3d const> world,
                                 std::span<ImagePoint const> image, double rank_tolerance) {
    if (world.size() != image.size())
      throw std::invalid_argument("fit_projective_camera: size mismatch");
    std::size_t const n = world.size();
    if (n < 6)
      throw DegenerateFit("need at least 6 points, got " + std::to_string(n));

    // Isotropic scaling: centroid to origin, mean distance sqrt(3) / sqrt(2).
    Eigen::Vector3d c3 = Eigen::Vector3d::Zero();
    Eigen::Vector2d c2 = Eigen::Vector2d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      c3 += world[i];
      c2 += Eigen::Vector2d(image[i].row, image[i].col);
    }
    c3 /= static_cast<double>(n);
    c2 /= static_cast<double>(n);
    double d3 = 0.0, d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d3 += (world[i] - c3).norm();
      d2 += (Eigen::Vector2d(image[i].row, image[i].col) - c2).norm();
    }
    double const s3 = std::sqrt(3.0) * static_cast<double>(n) / d3;
    double const s2 = std::sqrt(2.0) * static_cast<double>(n) / d2;
    if (!std::isfinite(s3) || !std::isfinite(s2))
      throw DegenerateFit("points collapse to a single location");

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * static_cast<Eigen::Index>(n), 12);
    for (std::size_t i = 0; i < n; ++i) {
      Eigen::Vector4d const X = (s3 * (world[i] - c3)).homogeneous();
      double const u = s2 * (image[i].row - c2.x());
      double const v = s2 * (image[i].col - c2.y());
      auto const r = static_cast<Eigen::Index>(2 * i);
      A.block<1, 4>(r, 0) = X.transpose();
      A.block<1, 4>(r, 8) = -u * X.transpose();
      A.block<1, 4>(r + 1, 4) = X.transpose();
      A.block<1, 4>(r + 1, 8) = -v * X.transpose();
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinV);
    auto const& s = svd.singularValues();
    if (!(s(10) > rank_tolerance * s(0)))
      throw DegenerateFit("projective regression is rank deficient");

    Eigen::Matrix<double, 12, 1> const p = svd.matrixV().col(11);
    Matrix34 Pn;
    Pn.row(0) = p.segment<4>(0).transpose();
    Pn.row(1) = p.segment<4>(4).transpose();
    Pn.row(2) = p.segment<4>(8).transpose();

    Eigen::Matrix4d T3 = Eigen::Matrix4d::Identity();
    T3.topLeftCorner<3, 3>() *= s3;
    T3.topRightCorner<3, 1>() = -s3 * c3;
    Eigen::Matrix3d T2inv = Eigen::Matrix3d::Identity();
    T2inv.topLeftCorner<2, 2>() /= s2;
    T2inv.topRightCorner<2, 1>() = c2;
    return T2inv * Pn * T3;
  }

  Eigen::Vector3d estimate_camera_center(RpcModel const& m, GridBounds const& bounds,
                                         std::optional<LocalFrame> frame,
                                         CameraCenterOptions const& opts) {
    bounds.validate();
    LocalFrame const f = frame.value_or(LocalFrame::centered_on(bounds));

    std::vector<GroundPoint> const grid =
      generate_cnp_grid({bounds, opts.n_lonlat, opts.n_alt});
    std::vector<Eigen::Vector3d> world;
    std::vector<ImagePoint> image;
    world.reserve(grid.size());
    image.reserve(grid.size());
    for (GroundPoint const& g : grid) {
      world.push_back(f.to_local(g));
      image.push_back(m.project(g));
    }

    Matrix34 const P = fit_projective_camera(world, image, opts.rank_tolerance);
    Eigen::JacobiSVD<Matrix34> svd(P, Eigen::ComputeFullV);
    Eigen::Vector4d const c = svd.matrixV().col(3);
    if (!(std::abs(c(3)) > 1e-12 * c.head<3>().norm()))
      throw DegenerateFit("camera center at infinity (affine camera)");
    return c.head<3>() / c(3);
  }

} // namespace rpcfit
