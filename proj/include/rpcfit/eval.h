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

/// \file eval.h
///
/// Check-point accuracy and the two robustness sweeps: growing the
/// horizontal footprint at a fixed grid, and densifying the grid over a
/// fixed footprint.

#ifndef RPCFIT_EVAL_H
#define RPCFIT_EVAL_H

#include <rpcfit/fit.h>
#include <rpcfit/grid.h>

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rpcfit {

  struct RmseResult {
    double row_rmse = 0.0;   // pixels
    double col_rmse = 0.0;   // pixels
    std::size_t n_points = 0;
  };

  /// Per-axis RMSE between `fitted` and `truth` over `ckps`. A projection
  /// failure of either model is rethrown as SensorProjectionError with the
  /// point index.
  RmseResult ckp_rmse(GeolocationModel const& fitted, GeolocationModel const& truth,
                      std::span<GroundPoint const> ckps);

  struct SensorFit {
    FitResult fit;
    RmseResult ckp;
    std::size_t n_cnp = 0;
  };

  /// CNP grid -> correspondences -> fit -> CKP evaluation. The CKP RMSE is
  /// also stored in fit.report.final_ckp_rmse.
  SensorFit fit_to_sensor(GeolocationModel const& truth, GridSpec const& spec,
                          FitConfig const& cfg = {}, int threads = 1);

  enum class SweepAxis { surface_area, grid_length };

  char const* to_string(SweepAxis axis);

  struct FitSummary {
    double chosen_h = 0.0;
    bool lcurve_fallback = false;
    int wls_iterations = 0;
    int iccv_iterations = 0;
    RmsePair cnp_rmse;
    std::size_t warnings = 0;

    int iterations() const { return wls_iterations + iccv_iterations; }
  };

  struct SweepSample {
    double param = 0.0;
    std::size_t n_cnp = 0;
    std::optional<RmseResult> rmse;      // set on success
    std::optional<FitSummary> fit;       // set on success
    std::string error;                   // "ErrorName: message" on failure

    bool ok() const { return rmse.has_value(); }
  };

  struct SweepResult {
    SweepAxis axis = SweepAxis::grid_length;
    std::vector<SweepSample> samples;
  };

  struct SweepOptions {
    int threads = 1;
    /// Called once per sample in parameter order, as soon as that sample
    /// and all earlier ones are done.
    std::function<void(std::size_t, SweepSample const&)> on_sample;
  };

  /// One fit per grid length n on the n x n x n_alt CNP grid over fixed
  /// bounds, evaluated on the matching CKP grid. Lengths must be strictly
  /// increasing (InvalidSpec otherwise). Per-sample failures are recorded
  /// and the sweep continues.
  SweepResult sweep_grid_length(GeolocationModel const& truth, GridBounds const& bounds,
                                std::span<int const> lengths, int n_alt,
                                FitConfig const& cfg = {}, SweepOptions const& opts = {});

  struct AreaSweepGrid {
    int n_lonlat = 50;
    int n_alt = 10;
  };

  /// One fit per square footprint center +/- half_width (degrees) on a
  /// fixed CNP grid. Half widths must be positive and strictly increasing.
  SweepResult sweep_surface_area(GeolocationModel const& truth, double center_lon,
                                 double center_lat, std::span<double const> half_widths,
                                 double alt_min, double alt_max, FitConfig const& cfg = {},
                                 SweepOptions const& opts = {}, AreaSweepGrid grid = {});

} // namespace rpcfit

#endif // RPCFIT_EVAL_H
