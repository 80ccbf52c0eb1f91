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

#include <rpcfit/error.h>
#include <rpcfit/eval.h>
#include <rpcfit/fit.h>
#include <rpcfit/grid.h>
#include <rpcfit/rpc_model.h>
#include <rpcfit/sensors.h>
#include <rpcfit/serialize.h>

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>
#include <sstream>

namespace py = pybind11;
using namespace rpcfit;

namespace {

  // Reports cross the boundary as plain dicts through their JSON form.
  py::object to_python(nlohmann::json const& j) {
    return py::module_::import("json").attr("loads")(j.dump());
  }

  using PointArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

  std::vector<GroundPoint> ground_points(PointArray const& a) {
    if (a.ndim() != 2 || a.shape(1) != 3)
      throw py::value_error("ground points must have shape (N, 3): lon, lat, alt");
    auto r = a.unchecked<2>();
    std::vector<GroundPoint> out(static_cast<std::size_t>(r.shape(0)));
    for (py::ssize_t i = 0; i < r.shape(0); ++i)
      out[static_cast<std::size_t>(i)] = {r(i, 0), r(i, 1), r(i, 2)};
    return out;
  }

  py::array_t<double> project_points(GeolocationModel const& m, PointArray const& pts) {
    std::vector<GroundPoint> const g = ground_points(pts);
    py::array_t<double> out({static_cast<py::ssize_t>(g.size()), py::ssize_t{2}});
    auto w = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < g.size(); ++i) {
      ImagePoint const p = m.project(g[i]);
      w(static_cast<py::ssize_t>(i), 0) = p.row;
      w(static_cast<py::ssize_t>(i), 1) = p.col;
    }
    return out;
  }

  CorrespondenceSet correspondences(PointArray const& ground, PointArray const& image) {
    std::vector<GroundPoint> const g = ground_points(ground);
    if (image.ndim() != 2 || image.shape(1) != 2 ||
        image.shape(0) != static_cast<py::ssize_t>(g.size()))
      throw py::value_error("image points must have shape (N, 2): row, col");
    auto r = image.unchecked<2>();
    std::vector<Correspondence> pts(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
      pts[i] = {g[i], {r(static_cast<py::ssize_t>(i), 0), r(static_cast<py::ssize_t>(i), 1)}};
    return make_correspondence_set(std::move(pts));
  }

  py::tuple fit_result(FitResult r) {
    return py::make_tuple(std::move(r.model), to_python(to_json(r.report)));
  }

  SweepOptions sweep_options(int threads, std::function<void(py::dict)> const& callback) {
    SweepOptions opts;
    opts.threads = threads;
    if (callback) {
      // Shared so that copies made without the GIL never touch Python refcounts.
      auto cb = std::make_shared<std::function<void(py::dict)>>(callback);
      opts.on_sample = [cb](std::size_t, SweepSample const& s) {
        py::gil_scoped_acquire gil;
        (*cb)(to_python(to_json(s)));
      };
    }
    return opts;
  }

  std::string rpc_text(RpcModel const& m) {
    std::ostringstream out;
    write_rpc(m, out);
    return out.str();
  }

} // namespace

PYBIND11_MODULE(_rpcfit, m) {
  m.doc() = "Fitting of rational polynomial camera models to geolocation models.";

  py::register_exception<Error>(m, "RpcfitError");

  py::class_<GridBounds>(m, "GridBounds")
    .def(py::init<double, double, double, double, double, double>(), py::arg("lon_min"),
         py::arg("lon_max"), py::arg("lat_min"), py::arg("lat_max"), py::arg("alt_min"),
         py::arg("alt_max"))
    .def_readwrite("lon_min", &GridBounds::lon_min)
    .def_readwrite("lon_max", &GridBounds::lon_max)
    .def_readwrite("lat_min", &GridBounds::lat_min)
    .def_readwrite("lat_max", &GridBounds::lat_max)
    .def_readwrite("alt_min", &GridBounds::alt_min)
    .def_readwrite("alt_max", &GridBounds::alt_max)
    .def("validate", &GridBounds::validate)
    .def("__repr__", [](GridBounds const& b) {
      return "GridBounds(" + to_json(b).dump() + ")";
    });

  py::class_<GridSpec>(m, "GridSpec")
    .def(py::init([](GridBounds b, int n_lonlat, int n_alt) {
           GridSpec s{b, n_lonlat, n_alt};
           s.validate();
           return s;
         }),
         py::arg("bounds"), py::arg("n_lonlat") = 50, py::arg("n_alt") = 10)
    .def_readwrite("bounds", &GridSpec::bounds)
    .def_readwrite("n_lonlat", &GridSpec::n_lonlat)
    .def_readwrite("n_alt", &GridSpec::n_alt);

  auto points_array = [](std::vector<GroundPoint> const& g) {
    py::array_t<double> out({static_cast<py::ssize_t>(g.size()), py::ssize_t{3}});
    auto w = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < g.size(); ++i) {
      w(static_cast<py::ssize_t>(i), 0) = g[i].lon;
      w(static_cast<py::ssize_t>(i), 1) = g[i].lat;
      w(static_cast<py::ssize_t>(i), 2) = g[i].alt;
    }
    return out;
  };
  m.def("cnp_grid", [points_array](GridSpec const& s) { return points_array(generate_cnp_grid(s)); },
        "Control points, shape (n_lonlat^2 * n_alt, 3).");
  m.def("ckp_grid", [points_array](GridSpec const& s) { return points_array(generate_ckp_grid(s)); },
        "Check points at the cell midpoints.");

  py::class_<FitConfig>(m, "FitConfig")
    .def(py::init([](double tol, int wls, int iccv, int samples, double floor) {
           FitConfig c{tol, wls, iccv, samples, floor};
           c.validate();
           return c;
         }),
         py::arg("rmse_tolerance") = 1e-10, py::arg("max_wls_iterations") = 20,
         py::arg("max_iccv_iterations") = 20, py::arg("lcurve_samples") = 100,
         py::arg("denominator_floor") = RpcModel::kDefaultDenominatorFloor)
    .def_readwrite("rmse_tolerance", &FitConfig::rmse_tolerance)
    .def_readwrite("max_wls_iterations", &FitConfig::max_wls_iterations)
    .def_readwrite("max_iccv_iterations", &FitConfig::max_iccv_iterations)
    .def_readwrite("lcurve_samples", &FitConfig::lcurve_samples)
    .def_readwrite("denominator_floor", &FitConfig::denominator_floor);

  py::class_<GeolocationModel, std::shared_ptr<GeolocationModel>>(m, "GeolocationModel")
    .def("project", [](GeolocationModel const& s, double lon, double lat, double alt) {
           ImagePoint const p = s.project({lon, lat, alt});
           return py::make_tuple(p.row, p.col);
         }, py::arg("lon"), py::arg("lat"), py::arg("alt"))
    .def("project_points", &project_points, py::arg("points"),
         "Projects an (N, 3) array of lon, lat, alt to an (N, 2) array of row, col.");

  py::class_<RpcModel, GeolocationModel, std::shared_ptr<RpcModel>>(m, "RpcModel")
    .def_static("read", [](std::filesystem::path const& p) { return read_rpc_file(p); })
    .def_static("from_text", [](std::string const& text) {
      std::istringstream in(text);
      return read_rpc(in);
    })
    .def("write", [](RpcModel const& r, std::filesystem::path const& p) { write_rpc_file(r, p); })
    .def("to_text", &rpc_text)
    .def("localize", [](RpcModel const& r, double row, double col, double alt) {
           GroundPoint const g = localize(r, {row, col}, alt);
           return py::make_tuple(g.lon, g.lat);
         }, py::arg("row"), py::arg("col"), py::arg("alt"))
    .def_property_readonly("coefficients", [](RpcModel const& r) {
      auto arr = [](PolyCoeffs const& c) { return std::vector<double>(c.c.begin(), c.c.end()); };
      py::dict d;
      d["line_num"] = arr(r.num_row());
      d["line_den"] = arr(r.den_row());
      d["samp_num"] = arr(r.num_col());
      d["samp_den"] = arr(r.den_col());
      return d;
    })
    .def_property_readonly("normalization", [](RpcModel const& r) {
      NormalizationParams const& n = r.norm();
      auto pair = [](Scaling s) { return py::make_tuple(s.offset, s.scale); };
      py::dict d;
      d["lon"] = pair(n.lon);
      d["lat"] = pair(n.lat);
      d["alt"] = pair(n.alt);
      d["row"] = pair(n.row);
      d["col"] = pair(n.col);
      return d;
    })
    .def("__eq__", [](RpcModel const& a, RpcModel const& b) { return a == b; });

  py::class_<PinholeSensor, GeolocationModel, std::shared_ptr<PinholeSensor>>(m, "PinholeSensor")
    .def(py::init([](Matrix34 const& P, double lon0, double lat0, std::optional<GridBounds> b) {
           return PinholeSensor(P, LocalFrame(lon0, lat0), b);
         }),
         py::arg("P"), py::arg("lon0"), py::arg("lat0"), py::arg("bounds") = py::none())
    .def_static("looking_down",
                [](GridBounds const& scene, Eigen::Vector3d const& center, double focal_px,
                   double principal_row, double principal_col, Eigen::Vector3d const& attitude) {
                  return PinholeSensor::looking_down(LocalFrame::centered_on(scene), center,
                                                     focal_px, {principal_row, principal_col},
                                                     attitude, scene);
                },
                py::arg("scene"), py::arg("center"), py::arg("focal_px"),
                py::arg("principal_row"), py::arg("principal_col"),
                py::arg("attitude") = Eigen::Vector3d::Zero(),
                "Camera above `scene`; `center` is in meters east, north, up of the scene center.")
    .def_property_readonly("matrix", &PinholeSensor::matrix)
    .def_property_readonly("center", &PinholeSensor::center);

  py::class_<PushbroomSensor, GeolocationModel, std::shared_ptr<PushbroomSensor>>(m,
                                                                                 "PushbroomSensor")
    .def_static("over_scene", &PushbroomSensor::over_scene, py::arg("scene"),
                py::arg("orbit_height") = 600e3, py::arg("gsd") = 0.5,
                py::arg("speed") = 7500.0, py::arg("attitude") = Eigen::Vector3d::Zero());

  py::class_<CorrectedRpcSensor, GeolocationModel, std::shared_ptr<CorrectedRpcSensor>>(
    m, "CorrectedRpcSensor")
    .def(py::init([](RpcModel base, Eigen::Matrix3d const& R, Eigen::Vector3d const& T,
                     Eigen::Vector3d const& C) {
           return CorrectedRpcSensor(std::move(base), RigidCorrection{R, T, C});
         }),
         py::arg("base"), py::arg("R"), py::arg("T"), py::arg("C"),
         "X -> R (X - T - C) + C in meters about the base model's horizontal center.");

  m.def("rotation_from_axis_angle", &rotation_from_axis_angle, py::arg("w"));

  m.def("estimate_camera_center",
        [](RpcModel const& r, GridBounds const& b) { return estimate_camera_center(r, b); },
        py::arg("model"), py::arg("bounds"),
        "Approximate camera center (meters, frame centered on `bounds`).");

  m.def("load_sensor",
        [](std::filesystem::path const& p) -> std::shared_ptr<GeolocationModel> {
          return std::const_pointer_cast<GeolocationModel>(load_sensor_file(p).sensor);
        },
        py::arg("path"), "Builds a sensor from a JSON configuration file.");

  m.def("fit",
        [](PointArray const& ground, PointArray const& image, FitConfig const& cfg) {
          CorrespondenceSet const data = correspondences(ground, image);
          FitResult r = [&] {
            py::gil_scoped_release release;
            return fit_rpc(data, cfg);
          }();
          return fit_result(std::move(r));
        },
        py::arg("ground"), py::arg("image"), py::arg("config") = FitConfig{},
        "Fits an RPC to correspondences. Returns (RpcModel, report dict).");

  m.def("fit_sensor",
        [](GeolocationModel const& sensor, GridSpec const& spec, FitConfig const& cfg,
           int threads) {
          SensorFit s = [&] {
            py::gil_scoped_release release;
            return fit_to_sensor(sensor, spec, cfg, threads);
          }();
          return fit_result(std::move(s.fit));
        },
        py::arg("sensor"), py::arg("spec"), py::arg("config") = FitConfig{},
        py::arg("threads") = 1,
        "Fits on the CNP grid of `spec` and evaluates on its CKP grid.");

  m.def("ckp_rmse",
        [](GeolocationModel const& fitted, GeolocationModel const& truth, PointArray const& pts) {
          return to_python(to_json(ckp_rmse(fitted, truth, ground_points(pts))));
        },
        py::arg("fitted"), py::arg("truth"), py::arg("points"));

  m.def("sweep_grid_length",
        [](GeolocationModel const& truth, GridBounds const& b, std::vector<int> const& lengths,
           int n_alt, FitConfig const& cfg, int threads,
           std::function<void(py::dict)> const& on_sample) {
          SweepOptions const opts = sweep_options(threads, on_sample);
          SweepResult r = [&] {
            py::gil_scoped_release release;
            return sweep_grid_length(truth, b, lengths, n_alt, cfg, opts);
          }();
          return to_python(to_json(r));
        },
        py::arg("truth"), py::arg("bounds"), py::arg("lengths"), py::arg("n_alt") = 10,
        py::arg("config") = FitConfig{}, py::arg("threads") = 1,
        py::arg("on_sample") = nullptr);

  m.def("sweep_surface_area",
        [](GeolocationModel const& truth, double lon, double lat,
           std::vector<double> const& half_widths, double alt_min, double alt_max,
           FitConfig const& cfg, int n_lonlat, int n_alt, int threads,
           std::function<void(py::dict)> const& on_sample) {
          SweepOptions const opts = sweep_options(threads, on_sample);
          SweepResult r = [&] {
            py::gil_scoped_release release;
            return sweep_surface_area(truth, lon, lat, half_widths, alt_min, alt_max, cfg, opts,
                                      {n_lonlat, n_alt});
          }();
          return to_python(to_json(r));
        },
        py::arg("truth"), py::arg("center_lon"), py::arg("center_lat"), py::arg("half_widths"),
        py::arg("alt_min"), py::arg("alt_max"), py::arg("config") = FitConfig{},
        py::arg("n_lonlat") = 50, py::arg("n_alt") = 10, py::arg("threads") = 1,
        py::arg("on_sample") = nullptr);
}
