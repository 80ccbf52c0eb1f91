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

// Command-line front end: fit, project, localize, evaluate, sweep.
//
// Exit codes:
//   0 success
//   1 internal error
//   2 usage error
//   3 I/O error
//   4 parse error (RPC text, CSV, JSON)
//   5 invalid input (bad grid, bounds, config values, too few points)
//   6 numerical failure
//   7 sensor failure (a point could not be projected by the input model)

#include <rpcfit/error.h>
#include <rpcfit/eval.h>
#include <rpcfit/fit.h>
#include <rpcfit/grid.h>
#include <rpcfit/rpc_model.h>
#include <rpcfit/sensors.h>
#include <rpcfit/serialize.h>
#include <rpcfit/text.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rpcfit;

namespace {

  enum ExitCode {
    kOk = 0,
    kInternal = 1,
    kUsage = 2,
    kIo = 3,
    kParse = 4,
    kInvalidInput = 5,
    kNumerical = 6,
    kSensor = 7
  };

  class UsageError : public Error {
  public:
    explicit UsageError(std::string const& msg) : Error("UsageError", msg) {}
  };

  int exit_code_for(Error const& e) {
    std::string const& n = e.name();
    if (n == "UsageError")
      return kUsage;
    if (n == "IoError")
      return kIo;
    if (n == "ParseError" || n == "MissingKey")
      return kParse;
    if (n == "InvalidSpec" || n == "TooFewPoints" || n == "DegenerateGeometry" ||
        n == "NonPositiveScale")
      return kInvalidInput;
    if (n == "DegenerateSpectrum" || n == "NumericalFailure" || n == "DenominatorNearZero" ||
        n == "NoConvergence" || n == "DegenerateFit")
      return kNumerical;
    if (n == "OutOfBounds" || n == "BehindCamera" || n == "NoAcquisition" ||
        n == "SensorProjectionError")
      return kSensor;
    return kInternal;
  }

  double const kNaN = std::numeric_limits<double>::quiet_NaN();

  // ---------------------------------------------------------------------
  // Configuration files. Flags given on the command line win over values
  // read from --config.

  struct ConfigFile {
    json doc = json::object();
    fs::path dir;

    bool has(char const* key) const { return doc.contains(key) && !doc.at(key).is_null(); }
  };

  ConfigFile load_config(std::string const& path) {
    ConfigFile c;
    if (path.empty())
      return c;
    c.doc = read_json_file(path);
    if (!c.doc.is_object())
      throw ParseError(path + ": configuration must be a JSON object");
    c.dir = fs::path(path).parent_path();
    return c;
  }

  template <typename T>
  T json_get(json const& j, char const* key) {
    try {
      return j.at(key).get<T>();
    } catch (json::exception const& e) {
      throw ParseError(std::string("configuration field '") + key + "': " + e.what());
    }
  }

  SensorConfig sensor_from(std::string const& flag, ConfigFile const& cfg) {
    if (!flag.empty())
      return load_sensor_file(flag);
    if (!cfg.has("sensor"))
      throw UsageError("a sensor configuration is required (--sensor or \"sensor\" in --config)");
    json const& s = cfg.doc.at("sensor");
    if (s.is_string()) {
      fs::path p = s.get<std::string>();
      if (p.is_relative() && !cfg.dir.empty())
        p = cfg.dir / p;
      return load_sensor_file(p);
    }
    return load_sensor(s, cfg.dir);
  }

  GridBounds bounds_from_list(std::vector<double> const& v) {
    if (v.size() != 6)
      throw UsageError("--bounds takes lon_min,lon_max,lat_min,lat_max,alt_min,alt_max");
    return {v[0], v[1], v[2], v[3], v[4], v[5]};
  }

  // The footprint of an RPC sensor defaults to its normalization domain.
  std::optional<GridBounds> default_bounds(SensorConfig const& s) {
    if (s.bounds)
      return s.bounds;
    if (auto const* rpc = dynamic_cast<RpcModel const*>(s.sensor.get())) {
      NormalizationParams const& n = rpc->norm();
      return GridBounds{n.lon.offset - n.lon.scale, n.lon.offset + n.lon.scale,
                        n.lat.offset - n.lat.scale, n.lat.offset + n.lat.scale,
                        n.alt.offset - n.alt.scale, n.alt.offset + n.alt.scale};
    }
    if (auto const* c = dynamic_cast<CorrectedRpcSensor const*>(s.sensor.get())) {
      NormalizationParams const& n = c->base().norm();
      return GridBounds{n.lon.offset - n.lon.scale, n.lon.offset + n.lon.scale,
                        n.lat.offset - n.lat.scale, n.lat.offset + n.lat.scale,
                        n.alt.offset - n.alt.scale, n.alt.offset + n.alt.scale};
    }
    return std::nullopt;
  }

  GridBounds resolve_bounds(std::vector<double> const& flag, ConfigFile const& cfg,
                            SensorConfig const& sensor) {
    if (!flag.empty())
      return bounds_from_list(flag);
    if (cfg.has("bounds"))
      return bounds_from_json(cfg.doc.at("bounds"));
    if (auto b = default_bounds(sensor))
      return *b;
    throw UsageError("ground bounds are required (--bounds, \"bounds\" in --config, or in the "
                     "sensor configuration)");
  }

  // Fit parameters: defaults, then the "fit" object of the config, then flags.
  struct FitFlags {
    std::optional<double> tolerance;
    std::optional<int> max_wls;
    std::optional<int> max_iccv;
    std::optional<int> lcurve_samples;
    std::optional<double> denominator_floor;

    void add_to(CLI::App* app) {
      app->add_option("--tolerance", tolerance, "RMSE change that stops the iterations (pixels)");
      app->add_option("--max-wls", max_wls, "Cap on weighted iterations");
      app->add_option("--max-iccv", max_iccv, "Cap on de-biasing iterations");
      app->add_option("--lcurve-samples", lcurve_samples, "Number of sampled ridge parameters");
      app->add_option("--denominator-floor", denominator_floor,
                      "Smallest accepted denominator magnitude");
    }

    FitConfig resolve(ConfigFile const& cfg) const {
      FitConfig f;
      if (cfg.has("fit")) {
        json const& j = cfg.doc.at("fit");
        if (j.contains("rmse_tolerance"))
          f.rmse_tolerance = json_get<double>(j, "rmse_tolerance");
        if (j.contains("max_wls_iterations"))
          f.max_wls_iterations = json_get<int>(j, "max_wls_iterations");
        if (j.contains("max_iccv_iterations"))
          f.max_iccv_iterations = json_get<int>(j, "max_iccv_iterations");
        if (j.contains("lcurve_samples"))
          f.lcurve_samples = json_get<int>(j, "lcurve_samples");
        if (j.contains("denominator_floor"))
          f.denominator_floor = json_get<double>(j, "denominator_floor");
      }
      if (tolerance)
        f.rmse_tolerance = *tolerance;
      if (max_wls)
        f.max_wls_iterations = *max_wls;
      if (max_iccv)
        f.max_iccv_iterations = *max_iccv;
      if (lcurve_samples)
        f.lcurve_samples = *lcurve_samples;
      if (denominator_floor)
        f.denominator_floor = *denominator_floor;
      f.validate();
      return f;
    }
  };

  template <typename T>
  T pick(std::optional<T> const& flag, ConfigFile const& cfg, char const* key, T fallback) {
    if (flag)
      return *flag;
    if (cfg.has(key))
      return json_get<T>(cfg.doc, key);
    return fallback;
  }

  template <typename T>
  std::vector<T> pick_list(std::vector<T> const& flag, ConfigFile const& cfg, char const* key) {
    if (!flag.empty())
      return flag;
    if (cfg.has(key))
      return json_get<std::vector<T>>(cfg.doc, key);
    return {};
  }

  std::string dump(json const& j) {
    return j.dump(2) + "\n";
  }

  // ---------------------------------------------------------------------
  // Point files for project and localize.

  std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
      std::size_t const comma = line.find(',', start);
      out.emplace_back(trim(line.substr(start, comma - start)));
      if (comma == std::string_view::npos)
        break;
      start = comma + 1;
    }
    return out;
  }

  struct PointTable {
    bool empty_file = true;
    std::vector<std::array<double, 3>> rows;
    std::vector<bool> valid;
  };

  PointTable read_point_table(fs::path const& path, std::string const& header) {
    std::ifstream in(path);
    if (!in)
      throw IoError("cannot open " + path.string());
    PointTable t;
    std::string line;
    std::size_t line_no = 0;
    bool seen_header = false;
    while (std::getline(in, line)) {
      ++line_no;
      std::string_view const body = trim(line);
      if (body.empty())
        continue;
      if (!seen_header) {
        if (body != header)
          throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                           ": expected header '" + header + "'");
        seen_header = true;
        t.empty_file = false;
        continue;
      }
      std::array<double, 3> v{kNaN, kNaN, kNaN};
      auto const fields = split_csv(body);
      bool ok = fields.size() == 3;
      for (std::size_t k = 0; k < 3 && k < fields.size(); ++k) {
        if (auto x = parse_double(fields[k]); x && std::isfinite(*x))
          v[k] = *x;
        else
          ok = false;
      }
      t.rows.push_back(v);
      t.valid.push_back(ok);
    }
    return t;
  }

  void report_rows(char const* cmd, std::size_t rows, std::size_t failed) {
    std::cerr << "rpcfit " << cmd << ": " << rows << " rows, " << failed << " warnings\n";
  }

  // ---------------------------------------------------------------------
  // Subcommands.

  struct FitArgs {
    std::string config, sensor, csv, out_rpc, out_report;
    std::vector<double> bounds;
    std::optional<int> n_lonlat, n_alt;
    int threads = 1;
    FitFlags fit;
  };

  int run_fit(FitArgs const& a) {
    ConfigFile const cfg = load_config(a.config);
    bool const from_csv = !a.csv.empty() || cfg.has("correspondences");
    bool const from_sensor = !a.sensor.empty() || cfg.has("sensor");
    if (from_csv == from_sensor)
      throw UsageError("give exactly one of --sensor and --csv");
    if (a.out_rpc.empty())
      throw UsageError("--out-rpc is required");
    if (a.threads < 1)
      throw UsageError("--threads must be at least 1");
    FitConfig const fit_cfg = a.fit.resolve(cfg);

    FitResult result = [&] {
      if (from_csv) {
        fs::path p = a.csv;
        if (p.empty()) {
          p = json_get<std::string>(cfg.doc, "correspondences");
          if (p.is_relative() && !cfg.dir.empty())
            p = cfg.dir / p;
        }
        return fit_rpc(read_correspondences_csv(p), fit_cfg);
      }
      SensorConfig const sensor = sensor_from(a.sensor, cfg);
      GridSpec spec{resolve_bounds(a.bounds, cfg, sensor),
                    pick(a.n_lonlat, cfg, "n_lonlat", 50), pick(a.n_alt, cfg, "n_alt", 10)};
      return fit_to_sensor(*sensor.sensor, spec, fit_cfg, a.threads).fit;
    }();

    std::ostringstream rpc_text;
    write_rpc(result.model, rpc_text);
    write_file_atomic(a.out_rpc, rpc_text.str());
    if (!a.out_report.empty())
      write_file_atomic(a.out_report, dump(to_json(result.report)));

    RmsePair const& r = result.report.final_cnp_rmse;
    std::cerr << "rpcfit fit: CNP RMSE row " << format_double(r.row) << " col "
              << format_double(r.col);
    if (result.report.final_ckp_rmse)
      std::cerr << ", CKP RMSE row " << format_double(result.report.final_ckp_rmse->row)
                << " col " << format_double(result.report.final_ckp_rmse->col);
    std::cerr << ", " << result.report.warnings.size() << " warnings\n";
    return kOk;
  }

  struct PointArgs {
    std::string rpc, input, out;
  };

  int run_project(PointArgs const& a) {
    RpcModel const model = read_rpc_file(a.rpc);
    PointTable const t = read_point_table(a.input, "lon,lat,alt");
    std::string out;
    std::size_t failed = 0;
    if (!t.empty_file) {
      out = "lon,lat,alt,row,col\n";
      for (std::size_t i = 0; i < t.rows.size(); ++i) {
        auto const& v = t.rows[i];
        double row = kNaN, col = kNaN;
        if (t.valid[i]) {
          try {
            ImagePoint const p = model.project({v[0], v[1], v[2]});
            row = p.row;
            col = p.col;
          } catch (Error const&) {
          }
        }
        if (!std::isfinite(row) || !std::isfinite(col))
          ++failed;
        out += format_double(v[0]) + ',' + format_double(v[1]) + ',' + format_double(v[2]) +
               ',' + format_double(row) + ',' + format_double(col) + '\n';
      }
    }
    write_file_atomic(a.out, out);
    report_rows("project", t.rows.size(), failed);
    return kOk;
  }

  int run_localize(PointArgs const& a) {
    RpcModel const model = read_rpc_file(a.rpc);
    PointTable const t = read_point_table(a.input, "row,col,alt");
    std::string out;
    std::size_t failed = 0;
    if (!t.empty_file) {
      out = "row,col,alt,lon,lat\n";
      for (std::size_t i = 0; i < t.rows.size(); ++i) {
        auto const& v = t.rows[i];
        double lon = kNaN, lat = kNaN;
        if (t.valid[i]) {
          try {
            GroundPoint const g = localize(model, {v[0], v[1]}, v[2]);
            lon = g.lon;
            lat = g.lat;
          } catch (Error const&) {
          }
        }
        if (!std::isfinite(lon) || !std::isfinite(lat))
          ++failed;
        out += format_double(v[0]) + ',' + format_double(v[1]) + ',' + format_double(v[2]) +
               ',' + format_double(lon) + ',' + format_double(lat) + '\n';
      }
    }
    write_file_atomic(a.out, out);
    report_rows("localize", t.rows.size(), failed);
    return kOk;
  }

  struct EvaluateArgs {
    std::string config, rpc, sensor, out;
    std::vector<double> bounds;
    std::optional<int> n_lonlat, n_alt;
  };

  int run_evaluate(EvaluateArgs const& a) {
    ConfigFile const cfg = load_config(a.config);
    RpcModel const model = read_rpc_file(a.rpc);
    SensorConfig const sensor = sensor_from(a.sensor, cfg);
    GridSpec const spec{resolve_bounds(a.bounds, cfg, sensor),
                        pick(a.n_lonlat, cfg, "n_lonlat", 50), pick(a.n_alt, cfg, "n_alt", 10)};
    spec.validate();
    std::vector<GroundPoint> const ckps = generate_ckp_grid(spec);
    RmseResult const r = ckp_rmse(model, *sensor.sensor, ckps);

    std::string const text = dump(to_json(r));
    if (!a.out.empty())
      write_file_atomic(a.out, text);
    std::cout << text;
    return kOk;
  }

  struct SweepArgs {
    std::string config, kind, sensor, out, csv;
    std::vector<double> bounds;
    std::vector<int> lengths;
    std::vector<double> half_widths, center, alt_range;
    std::optional<int> n_lonlat, n_alt;
    std::optional<int> threads;
    FitFlags fit;
  };

  int run_sweep(SweepArgs const& a) {
    ConfigFile const cfg = load_config(a.config);
    std::string const kind = !a.kind.empty() ? a.kind
                             : cfg.has("kind") ? json_get<std::string>(cfg.doc, "kind")
                                               : std::string();
    if (kind != "grid_length" && kind != "surface_area")
      throw UsageError("sweep kind must be grid_length or surface_area, got '" + kind + "'");
    if (a.out.empty() && a.csv.empty())
      throw UsageError("give --out and/or --csv");
    int const threads = pick(a.threads, cfg, "threads", 1);
    if (threads < 1)
      throw UsageError("--threads must be at least 1");
    FitConfig const fit_cfg = a.fit.resolve(cfg);
    SensorConfig const sensor = sensor_from(a.sensor, cfg);

    // Results so far are rewritten after every finished sample, so an
    // interrupted sweep leaves valid files holding the completed prefix.
    SweepResult partial;
    partial.axis = kind == "grid_length" ? SweepAxis::grid_length : SweepAxis::surface_area;
    auto flush = [&] {
      if (!a.out.empty())
        write_file_atomic(a.out, dump(to_json(partial)));
      if (!a.csv.empty())
        write_file_atomic(a.csv, to_csv(partial));
    };
    SweepOptions opts;
    opts.threads = threads;
    opts.on_sample = [&](std::size_t, SweepSample const& s) {
      partial.samples.push_back(s);
      flush();
      std::cerr << "rpcfit sweep: " << kind << " " << format_double(s.param) << ": "
                << (s.ok() ? "row " + format_double(s.rmse->row_rmse) + " col " +
                               format_double(s.rmse->col_rmse)
                           : s.error)
                << "\n";
    };

    SweepResult result;
    if (kind == "grid_length") {
      std::vector<int> lengths = pick_list(a.lengths, cfg, "lengths");
      if (lengths.empty())
        lengths = {5, 10, 20, 40};
      GridBounds const b = resolve_bounds(a.bounds, cfg, sensor);
      result = sweep_grid_length(*sensor.sensor, b, lengths, pick(a.n_alt, cfg, "n_alt", 10),
                                 fit_cfg, opts);
    } else {
      std::vector<double> widths = pick_list(a.half_widths, cfg, "half_widths");
      if (widths.empty())
        widths = {0.02, 0.05, 0.1, 0.3};
      std::vector<double> center = pick_list(a.center, cfg, "center");
      std::vector<double> alt = pick_list(a.alt_range, cfg, "alt_range");
      if (center.empty() || alt.empty()) {
        std::optional<GridBounds> b;
        if (!a.bounds.empty() || cfg.has("bounds"))
          b = resolve_bounds(a.bounds, cfg, sensor);
        else
          b = default_bounds(sensor);
        if (!b)
          throw UsageError("surface_area needs --center and --alt-range, or ground bounds");
        if (center.empty())
          center = {0.5 * (b->lon_min + b->lon_max), 0.5 * (b->lat_min + b->lat_max)};
        if (alt.empty())
          alt = {b->alt_min, b->alt_max};
      }
      if (center.size() != 2)
        throw UsageError("--center takes lon,lat");
      if (alt.size() != 2)
        throw UsageError("--alt-range takes min,max");
      AreaSweepGrid grid{pick(a.n_lonlat, cfg, "n_lonlat", 50), pick(a.n_alt, cfg, "n_alt", 10)};
      result = sweep_surface_area(*sensor.sensor, center[0], center[1], widths, alt[0], alt[1],
                                  fit_cfg, opts, grid);
    }

    partial = std::move(result);
    flush();
    return kOk;
  }

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fit rational polynomial camera models to geolocation models."};
  app.require_subcommand(1);

  FitArgs fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit an RPC to a sensor or to correspondences");
  fit_cmd->add_option("--config", fit.config, "JSON configuration; flags override it");
  fit_cmd->add_option("--sensor", fit.sensor, "Sensor configuration JSON");
  fit_cmd->add_option("--csv", fit.csv, "Correspondences CSV (lon,lat,alt,row,col)");
  fit_cmd->add_option("--bounds", fit.bounds, "lon_min,lon_max,lat_min,lat_max,alt_min,alt_max")
    ->delimiter(',');
  fit_cmd->add_option("--n-lonlat", fit.n_lonlat, "Grid length per horizontal axis");
  fit_cmd->add_option("--n-alt", fit.n_alt, "Number of height layers");
  fit_cmd->add_option("--out-rpc", fit.out_rpc, "Output RPC text file");
  fit_cmd->add_option("--out-report", fit.out_report, "Output fit report JSON");
  fit_cmd->add_option("--threads", fit.threads, "Threads used to project grid points");
  fit.fit.add_to(fit_cmd);

  PointArgs project;
  CLI::App* project_cmd = app.add_subcommand("project", "Project lon,lat,alt points");
  project_cmd->add_option("--rpc", project.rpc, "RPC text file")->required();
  project_cmd->add_option("--points", project.input, "CSV with header lon,lat,alt")->required();
  project_cmd->add_option("--out", project.out, "Output CSV")->required();

  PointArgs loc;
  CLI::App* localize_cmd = app.add_subcommand("localize", "Localize row,col pixels at a height");
  localize_cmd->add_option("--rpc", loc.rpc, "RPC text file")->required();
  localize_cmd->add_option("--pixels", loc.input, "CSV with header row,col,alt")->required();
  localize_cmd->add_option("--out", loc.out, "Output CSV")->required();

  EvaluateArgs eval;
  CLI::App* eval_cmd = app.add_subcommand("evaluate", "Check-point RMSE of an RPC against a sensor");
  eval_cmd->add_option("--config", eval.config, "JSON configuration; flags override it");
  eval_cmd->add_option("--rpc", eval.rpc, "RPC text file")->required();
  eval_cmd->add_option("--sensor", eval.sensor, "Sensor configuration JSON");
  eval_cmd->add_option("--bounds", eval.bounds, "lon_min,lon_max,lat_min,lat_max,alt_min,alt_max")
    ->delimiter(',');
  eval_cmd->add_option("--n-lonlat", eval.n_lonlat, "CNP grid length (CKPs are the cell midpoints)");
  eval_cmd->add_option("--n-alt", eval.n_alt, "Number of CNP height layers");
  eval_cmd->add_option("--out", eval.out, "Also write the JSON result here");

  SweepArgs sweep;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Grid-length or surface-area sweep");
  sweep_cmd->add_option("--config", sweep.config, "JSON configuration; flags override it");
  sweep_cmd->add_option("--kind", sweep.kind, "grid_length or surface_area");
  sweep_cmd->add_option("--sensor", sweep.sensor, "Sensor configuration JSON");
  sweep_cmd->add_option("--bounds", sweep.bounds, "lon_min,lon_max,lat_min,lat_max,alt_min,alt_max")
    ->delimiter(',');
  sweep_cmd->add_option("--lengths", sweep.lengths, "Grid lengths (grid_length)")->delimiter(',');
  sweep_cmd->add_option("--half-widths", sweep.half_widths, "Half widths in degrees (surface_area)")
    ->delimiter(',');
  sweep_cmd->add_option("--center", sweep.center, "lon,lat of the footprints (surface_area)")
    ->delimiter(',');
  sweep_cmd->add_option("--alt-range", sweep.alt_range, "min,max height (surface_area)")
    ->delimiter(',');
  sweep_cmd->add_option("--n-lonlat", sweep.n_lonlat, "Grid length (surface_area)");
  sweep_cmd->add_option("--n-alt", sweep.n_alt, "Number of height layers");
  sweep_cmd->add_option("--threads", sweep.threads, "Samples fitted in parallel");
  sweep_cmd->add_option("--out", sweep.out, "Output JSON");
  sweep_cmd->add_option("--csv", sweep.csv, "Output CSV");
  sweep.fit.add_to(sweep_cmd);

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::CallForAllHelp const& e) {
    return app.exit(e);
  } catch (CLI::CallForVersion const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*fit_cmd)
      return run_fit(fit);
    if (*project_cmd)
      return run_project(project);
    if (*localize_cmd)
      return run_localize(loc);
    if (*eval_cmd)
      return run_evaluate(eval);
    if (*sweep_cmd)
      return run_sweep(sweep);
  } catch (Error const& e) {
    std::cerr << "rpcfit: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (std::invalid_argument const& e) {
    std::cerr << "rpcfit: InvalidInput: " << e.what() << "\n";
    return kInvalidInput;
  } catch (std::exception const& e) {
    std::cerr << "rpcfit: InternalError: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
