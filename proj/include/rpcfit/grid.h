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

/// \file grid.h
///
/// Control point (CNP) and check point (CKP) grids, and correspondence sets
/// built by projecting grid points through a geolocation model.
///
/// Grid points are ordered altitude-major, then latitude, then longitude:
/// index = (k * n_lat + j) * n_lon + i.

#ifndef RPCFIT_GRID_H
#define RPCFIT_GRID_H

#include <rpcfit/geolocation.h>
#include <rpcfit/rpc_model.h>

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace rpcfit {

  struct GridBounds {
    double lon_min = 0.0, lon_max = 0.0;   // degrees
    double lat_min = 0.0, lat_max = 0.0;   // degrees
    double alt_min = 0.0, alt_max = 0.0;   // meters

    /// Throws InvalidSpec unless lon and lat ranges are non-empty and
    /// alt_min <= alt_max.
    void validate() const;

    bool contains(GroundPoint const& p, double rel_tol = 1e-9) const;

    friend bool operator==(GridBounds const&, GridBounds const&) = default;
  };

  struct GridSpec {
    GridBounds bounds;
    int n_lonlat = 50;   // samples per horizontal axis ("grid length")
    int n_alt = 10;      // elevation layers

    void validate() const;
  };

  /// n evenly spaced values from min to max, both endpoints exact.
  std::vector<double> linspace(double min, double max, int n);

  std::vector<GroundPoint> generate_cnp_grid(GridSpec const& spec);

  /// Axis-wise midpoints of every CNP grid cell.
  std::vector<GroundPoint> generate_ckp_grid(GridSpec const& spec);

  struct Correspondence {
    GroundPoint ground;
    ImagePoint image;
  };

  struct CorrespondenceSet {
    std::vector<Correspondence> points;
    NormalizationParams norm;
    std::vector<std::string> warnings;

    std::size_t size() const { return points.size(); }
  };

  /// Normalization from the min/max of each coordinate over the set.
  /// Degenerate (constant) coordinates get scale 1 and a warning.
  NormalizationParams normalization_from_extents(std::span<Correspondence const> points,
                                                 std::vector<std::string>* warnings = nullptr);

  /// Projects every point through `sensor`. Output order is the input order
  /// for any thread count. Sensor failures are rethrown as
  /// SensorProjectionError carrying the point index.
  CorrespondenceSet build_correspondences(GeolocationModel const& sensor,
                                          std::span<GroundPoint const> points,
                                          int threads = 1);

  /// Wraps raw correspondences (e.g. read from CSV) with extent-derived
  /// normalization.
  CorrespondenceSet make_correspondence_set(std::vector<Correspondence> points);

  // CSV with header "lon,lat,alt,row,col".
  void write_correspondences_csv(CorrespondenceSet const& set, std::ostream& out);
  CorrespondenceSet read_correspondences_csv(std::istream& in);
  CorrespondenceSet read_correspondences_csv(std::filesystem::path const& path);

} // namespace rpcfit

#endif // RPCFIT_GRID_H
