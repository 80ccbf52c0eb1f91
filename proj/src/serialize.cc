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

#include <rpcfit/serialize.h>
#include <rpcfit/error.h>
#include <rpcfit/text.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace rpcfit {

  using nlohmann::json;

  json to_json(RmsePair const& r) {
    return json::array({r.row, r.col});
  }

  json to_json(FitReport const& r) {
    json trace_wls = json::array(), trace_iccv = json::array();
    for (RmsePair const& p : r.wls_rmse_trace)
      trace_wls.push_back(to_json(p));
    for (RmsePair const& p : r.iccv_rmse_trace)
      trace_iccv.push_back(to_json(p));

    json j;
    j["chosen_h"] = r.chosen_h;
    j["wls_rmse_trace"] = trace_wls;
    j["iccv_rmse_trace"] = trace_iccv;
    j["final_cnp_rmse"] = to_json(r.final_cnp_rmse);
    j["final_ckp_rmse"] = r.final_ckp_rmse ? to_json(*r.final_ckp_rmse) : json(nullptr);
    j["iterations_used"] = {{"wls", r.wls_iterations}, {"iccv", r.iccv_iterations}};
    j["warnings"] = r.warnings;
    j["sigma_min"] = r.sigma_min;
    j["sigma_max"] = r.sigma_max;
    j["lcurve_fallback"] = r.lcurve_fallback;
    j["best_iterate"] = {{"phase", r.best_phase}, {"iteration", r.best_iteration}};
    return j;
  }

  json to_json(RmseResult const& r) {
    return {{"row_rmse", r.row_rmse}, {"col_rmse", r.col_rmse}, {"n_points", r.n_points}};
  }

  json to_json(SweepSample const& s) {
    json j;
    j["param"] = s.param;
    j["n_cnp"] = s.n_cnp;
    if (s.ok()) {
      j["rmse"] = to_json(*s.rmse);
      j["fit"] = {{"chosen_h", s.fit->chosen_h},
                  {"lcurve_fallback", s.fit->lcurve_fallback},
                  {"iterations_used", {{"wls", s.fit->wls_iterations},
                                       {"iccv", s.fit->iccv_iterations}}},
                  {"final_cnp_rmse", to_json(s.fit->cnp_rmse)},
                  {"warnings", s.fit->warnings}};
      j["error"] = nullptr;
    } else {
      j["rmse"] = nullptr;
      j["fit"] = nullptr;
      j["error"] = s.error;
    }
    return j;
  }

  json to_json(SweepResult const& s) {
    json samples = json::array();
    for (SweepSample const& x : s.samples)
      samples.push_back(to_json(x));
    return {{"axis", to_string(s.axis)}, {"samples", samples}};
  }

  json to_json(GridBounds const& b) {
    return {{"lon_min", b.lon_min}, {"lon_max", b.lon_max}, {"lat_min", b.lat_min},
            {"lat_max", b.lat_max}, {"alt_min", b.alt_min}, {"alt_max", b.alt_max}};
  }

  namespace {

    json const& field(json const& j, char const* key) {
      if (!j.is_object() || !j.contains(key))
        throw ParseError(std::string("missing field '") + key + "'");
      return j.at(key);
    }

    double number(json const& j, char const* key) {
      json const& v = field(j, key);
      if (!v.is_number())
        throw ParseError(std::string("field '") + key + "' must be a number");
      return v.get<double>();
    }

    double number_or(json const& j, char const* key, double fallback) {
      return j.contains(key) ? number(j, key) : fallback;
    }

    template <int N>
    Eigen::Matrix<double, N, 1> vec(json const& j, char const* key) {
      json const& v = field(j, key);
      if (!v.is_array() || v.size() != N)
        throw ParseError(std::string("field '") + key + "' must be an array of " +
                         std::to_string(N) + " numbers");
      Eigen::Matrix<double, N, 1> out;
      for (int i = 0; i < N; ++i) {
        if (!v[i].is_number())
          throw ParseError(std::string("field '") + key + "' must hold numbers");
        out(i) = v[i].get<double>();
      }
      return out;
    }

    template <int R, int C>
    Eigen::Matrix<double, R, C> mat(json const& j, char const* key) {
      json const& v = field(j, key);
      if (!v.is_array() || v.size() != R)
        throw ParseError(std::string("field '") + key + "' must have " + std::to_string(R) +
                         " rows");
      Eigen::Matrix<double, R, C> out;
      for (int r = 0; r < R; ++r) {
        if (!v[r].is_array() || v[r].size() != C)
          throw ParseError(std::string("field '") + key + "' rows must have " +
                           std::to_string(C) + " numbers");
        for (int c = 0; c < C; ++c) {
          if (!v[r][c].is_number())
            throw ParseError(std::string("field '") + key + "' must hold numbers");
          out(r, c) = v[r][c].get<double>();
        }
      }
      return out;
    }

    LocalFrame frame_from_json(json const& j) {
      return LocalFrame(number(j, "lon"), number(j, "lat"));
    }

    RpcModel rpc_from(json const& ref, std::filesystem::path const& base_dir) {
      std::filesystem::path p;
      if (ref.is_string())
        p = ref.get<std::string>();
      else
        p = field(ref, "path").get<std::string>();
      if (p.is_relative() && !base_dir.empty())
        p = base_dir / p;
      return read_rpc_file(p);
    }

    std::string type_of(json const& j) {
      json const& t = field(j, "type");
      if (!t.is_string())
        throw ParseError("field 'type' must be a string");
      return t.get<std::string>();
    }

  } // namespace

  GridBounds bounds_from_json(json const& j) {
    GridBounds b{number(j, "lon_min"), number(j, "lon_max"), number(j, "lat_min"),
                 number(j, "lat_max"), number(j, "alt_min"), number(j, "alt_max")};
    return b;
  }

  std::string sweep_csv_header() {
    return "param,row_rmse,col_rmse,chosen_h,iterations\n";
  }

  std::string sweep_csv_row(SweepSample const& s) {
    double const nan = std::numeric_limits<double>::quiet_NaN();
    std::ostringstream out;
    out << format_double(s.param) << ','
        << format_double(s.ok() ? s.rmse->row_rmse : nan) << ','
        << format_double(s.ok() ? s.rmse->col_rmse : nan) << ','
        << format_double(s.ok() ? s.fit->chosen_h : nan) << ','
        << (s.ok() ? std::to_string(s.fit->iterations()) : std::string("nan")) << '\n';
    return out.str();
  }

  std::string to_csv(SweepResult const& s) {
    std::string out = sweep_csv_header();
    for (SweepSample const& x : s.samples)
      out += sweep_csv_row(x);
    return out;
  }

  SensorConfig load_sensor(json const& j, std::filesystem::path const& base_dir) {
    SensorConfig cfg;
    cfg.type = type_of(j);
    if (j.contains("bounds"))
      cfg.bounds = bounds_from_json(j.at("bounds"));

    try {
      if (cfg.type == "rpc") {
        cfg.sensor = std::make_shared<RpcModel>(rpc_from(j, base_dir));
      } else if (cfg.type == "pinhole") {
        LocalFrame const frame = frame_from_json(field(j, "frame"));
        if (j.contains("P")) {
          cfg.sensor = std::make_shared<PinholeSensor>(mat<3, 4>(j, "P"), frame, cfg.bounds);
        } else {
          json const& pp = field(j, "principal");
          if (!pp.is_array() || pp.size() != 2)
            throw ParseError("field 'principal' must be [row, col]");
          Eigen::Vector3d const att =
            j.contains("attitude") ? vec<3>(j, "attitude") : Eigen::Vector3d::Zero();
          cfg.sensor = std::make_shared<PinholeSensor>(PinholeSensor::looking_down(
            frame, vec<3>(j, "center"), number(j, "focal_px"),
            {pp[0].get<double>(), pp[1].get<double>()}, att, cfg.bounds));
        }
      } else if (cfg.type == "pushbroom") {
        Eigen::Vector3d const att =
          j.contains("attitude") ? vec<3>(j, "attitude") : Eigen::Vector3d::Zero();
        if (j.contains("scene")) {
          GridBounds const scene = bounds_from_json(j.at("scene"));
          auto s = PushbroomSensor::over_scene(scene, number_or(j, "orbit_height", 600e3),
                                               number_or(j, "gsd", 0.5),
                                               number_or(j, "speed", 7500.0), att);
          if (!cfg.bounds)
            cfg.bounds = scene;
          cfg.sensor = std::make_shared<PushbroomSensor>(s.params(), cfg.bounds);
        } else {
          PushbroomParams p;
          p.position = vec<3>(j, "position");
          p.velocity = vec<3>(j, "velocity");
          p.line_period = number(j, "line_period");
          p.focal_ratio = number(j, "focal_ratio");
          p.col_center = number_or(j, "col_center", 0.0);
          p.attitude = att;
          p.num_lines = static_cast<int>(number_or(j, "num_lines", 0.0));
          cfg.sensor = std::make_shared<PushbroomSensor>(p, cfg.bounds);
        }
      } else if (cfg.type == "corrected_rpc") {
        RpcModel base = rpc_from(field(j, "base"), base_dir);
        RigidCorrection corr;
        if (j.contains("rotation"))
          corr.R = mat<3, 3>(j, "rotation");
        else if (j.contains("axis_angle"))
          corr.R = rotation_from_axis_angle(vec<3>(j, "axis_angle"));
        if (j.contains("translation"))
          corr.T = vec<3>(j, "translation");
        LocalFrame const frame = j.contains("frame")
                                   ? frame_from_json(j.at("frame"))
                                   : LocalFrame(base.norm().lon.offset, base.norm().lat.offset);
        if (j.contains("center")) {
          json const& c = j.at("center");
          if (c.is_string() && c.get<std::string>() == "estimate") {
            GridBounds const b = cfg.bounds.value_or(GridBounds{
              base.norm().lon.offset - base.norm().lon.scale,
              base.norm().lon.offset + base.norm().lon.scale,
              base.norm().lat.offset - base.norm().lat.scale,
              base.norm().lat.offset + base.norm().lat.scale,
              base.norm().alt.offset - base.norm().alt.scale,
              base.norm().alt.offset + base.norm().alt.scale});
            corr.C = estimate_camera_center(base, b, frame);
          } else {
            corr.C = vec<3>(j, "center");
          }
        }
        cfg.sensor = std::make_shared<CorrectedRpcSensor>(std::move(base), corr, frame);
      } else {
        throw ParseError("unknown sensor type '" + cfg.type + "'");
      }
    } catch (json::exception const& e) {
      throw ParseError(std::string("sensor configuration: ") + e.what());
    } catch (std::invalid_argument const& e) {
      throw ParseError(std::string("sensor configuration: ") + e.what());
    }
    return cfg;
  }

  json read_json_file(std::filesystem::path const& path) {
    std::ifstream in(path);
    if (!in)
      throw IoError("cannot open " + path.string());
    try {
      return json::parse(in);
    } catch (json::parse_error const& e) {
      throw ParseError(path.string() + ": " + e.what());
    }
  }

  SensorConfig load_sensor_file(std::filesystem::path const& path) {
    return load_sensor(read_json_file(path), path.parent_path());
  }

} // namespace rpcfit
