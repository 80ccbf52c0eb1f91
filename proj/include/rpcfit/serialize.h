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

/// \file serialize.h
///
/// JSON and CSV forms of reports, and JSON sensor configurations.
///
/// Sensor configuration objects carry a "type" tag:
///
///   {"type": "rpc", "path": "model.rpc"}
///   {"type": "pinhole", "frame": {"lon": .., "lat": ..},
///    "P": [[4 numbers], [4 numbers], [4 numbers]]}
///   {"type": "pinhole", "frame": {...}, "center": [e, n, u], "focal_px": ..,
///    "principal": [row, col], "attitude": [wx, wy, wz]}
///   {"type": "pushbroom", "position": [x, y, z], "velocity": [vx, vy, vz],
///    "line_period": .., "focal_ratio": .., "col_center": .., "attitude": [..],
///    "num_lines": ..}
///   {"type": "pushbroom", "scene": {bounds}, "orbit_height": .., "gsd": ..,
///    "speed": .., "attitude": [..]}
///   {"type": "corrected_rpc", "base": "model.rpc" | {sensor rpc object},
///    "rotation": [[3], [3], [3]] | "axis_angle": [3], "translation": [3],
///    "center": [3] | "estimate", "frame": {"lon": .., "lat": ..}}
///
/// Any of them may carry "bounds": {"lon_min", "lon_max", "lat_min",
/// "lat_max", "alt_min", "alt_max"}. Relative paths resolve against the
/// directory of the configuration file.

#ifndef RPCFIT_SERIALIZE_H
#define RPCFIT_SERIALIZE_H

#include <rpcfit/eval.h>
#include <rpcfit/fit.h>
#include <rpcfit/sensors.h>

#include <json.hpp>

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace rpcfit {

  nlohmann::json to_json(RmsePair const& r);
  nlohmann::json to_json(FitReport const& r);
  nlohmann::json to_json(RmseResult const& r);
  nlohmann::json to_json(SweepSample const& s);
  nlohmann::json to_json(SweepResult const& s);
  nlohmann::json to_json(GridBounds const& b);

  /// Throws ParseError on missing or mistyped fields.
  GridBounds bounds_from_json(nlohmann::json const& j);

  std::string sweep_csv_header();
  std::string sweep_csv_row(SweepSample const& s);
  std::string to_csv(SweepResult const& s);

  struct SensorConfig {
    std::string type;
    std::shared_ptr<GeolocationModel const> sensor;
    std::optional<GridBounds> bounds;
  };

  /// Builds a sensor from a configuration object. Throws ParseError for
  /// malformed configurations and IoError for unreadable referenced files.
  SensorConfig load_sensor(nlohmann::json const& j, std::filesystem::path const& base_dir = {});
  SensorConfig load_sensor_file(std::filesystem::path const& path);

  nlohmann::json read_json_file(std::filesystem::path const& path);

} // namespace rpcfit

#endif // RPCFIT_SERIALIZE_H
