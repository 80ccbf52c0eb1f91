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

#include <rpcfit/eval.h>
#include <rpcfit/error.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <mutex>
#include <thread>

namespace rpcfit {

  RmseResult ckp_rmse(GeolocationModel const& fitted, GeolocationModel const& truth,
                      std::span<GroundPoint const> ckps) {
    double sr = 0.0, sc = 0.0;
    for (std::size_t i = 0; i < ckps.size(); ++i) {
      ImagePoint a, b;
      try {
        a = fitted.project(ckps[i]);
        b = truth.project(ckps[i]);
      } catch (std::exception const& e) {
        throw SensorProjectionError(i, e.what());
      }
      sr += (a.row - b.row) * (a.row - b.row);
      sc += (a.col - b.col) * (a.col - b.col);
    }
    RmseResult r;
    r.n_points = ckps.size();
    if (r.n_points > 0) {
      r.row_rmse = std::sqrt(sr / static_cast<double>(r.n_points));
      r.col_rmse = std::sqrt(sc / static_cast<double>(r.n_points));
    }
    return r;
  }

  SensorFit fit_to_sensor(GeolocationModel const& truth, GridSpec const& spec,
                          FitConfig const& cfg, int threads) {
    std::vector<GroundPoint> const cnps = generate_cnp_grid(spec);
    std::vector<GroundPoint> const ckps = generate_ckp_grid(spec);
    CorrespondenceSet const data = build_correspondences(truth, cnps, threads);
    SensorFit out{fit_rpc(data, cfg), {}, cnps.size()};
    out.ckp = ckp_rmse(out.fit.model, truth, ckps);
    out.fit.report.final_ckp_rmse = RmsePair{out.ckp.row_rmse, out.ckp.col_rmse};
    return out;
  }

  char const* to_string(SweepAxis axis) {
    switch (axis) {
      case SweepAxis::surface_area: return "surface_area";
      case SweepAxis::grid_length: return "grid_length";
    }
    return "unknown";
  }

  namespace {

    SweepSample run_sample(GeolocationModel const& truth, GridSpec const& spec, double param,
                           FitConfig const& cfg) {
      SweepSample s;
      s.param = param;
      try {
        s.n_cnp = static_cast<std::size_t>(spec.n_lonlat) * spec.n_lonlat * spec.n_alt;
        SensorFit const f = fit_to_sensor(truth, spec, cfg);
        FitReport const& r = f.fit.report;
        s.rmse = f.ckp;
        s.fit = FitSummary{r.chosen_h, r.lcurve_fallback, r.wls_iterations,
                           r.iccv_iterations, r.final_cnp_rmse, r.warnings.size()};
      } catch (Error const& e) {
        s.error = e.what();
      } catch (std::exception const& e) {
        s.error = std::string("Error: ") + e.what();
      }
      return s;
    }

    /// Runs `count` independent jobs on up to `threads` workers and hands
    /// results to `on_sample` strictly in index order.
    SweepResult run_ordered(SweepAxis axis, std::size_t count,
                            std::function<SweepSample(std::size_t)> const& job,
                            SweepOptions const& opts) {
      SweepResult result;
      result.axis = axis;
      result.samples.resize(count);

      std::size_t const workers =
        std::clamp<std::size_t>(opts.threads < 1 ? 1 : static_cast<std::size_t>(opts.threads),
                                1, std::max<std::size_t>(count, 1));
      if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) {
          result.samples[i] = job(i);
          if (opts.on_sample)
            opts.on_sample(i, result.samples[i]);
        }
        return result;
      }

      std::vector<bool> done(count, false);
      std::mutex mtx;
      std::condition_variable cv;
      std::atomic<std::size_t> next{0};
      {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
          pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
              SweepSample s = job(i);
              std::lock_guard lock(mtx);
              result.samples[i] = std::move(s);
              done[i] = true;
              cv.notify_all();
            }
          });

        for (std::size_t i = 0; i < count; ++i) {
          std::unique_lock lock(mtx);
          cv.wait(lock, [&] { return done[i]; });
          lock.unlock();
          if (opts.on_sample)
            opts.on_sample(i, result.samples[i]);
        }
      }
      return result;
    }

  } // namespace

  SweepResult sweep_grid_length(GeolocationModel const& truth, GridBounds const& bounds,
                                std::span<int const> lengths, int n_alt,
                                FitConfig const& cfg, SweepOptions const& opts) {
    bounds.validate();
    cfg.validate();
    for (std::size_t i = 1; i < lengths.size(); ++i)
      if (!(lengths[i] > lengths[i - 1]))
        throw InvalidSpec("grid lengths must be strictly increasing");

    return run_ordered(SweepAxis::grid_length, lengths.size(),
                       [&](std::size_t i) {
                         return run_sample(truth, GridSpec{bounds, lengths[i], n_alt},
                                           lengths[i], cfg);
                       },
                       opts);
  }

  SweepResult sweep_surface_area(GeolocationModel const& truth, double center_lon,
                                 double center_lat, std::span<double const> half_widths,
                                 double alt_min, double alt_max, FitConfig const& cfg,
                                 SweepOptions const& opts, AreaSweepGrid grid) {
    cfg.validate();
    for (std::size_t i = 0; i < half_widths.size(); ++i) {
      if (!(half_widths[i] > 0.0))
        throw InvalidSpec("footprint half width must be positive");
      if (i > 0 && !(half_widths[i] > half_widths[i - 1]))
        throw InvalidSpec("half widths must be strictly increasing");
    }
    if (!(alt_min <= alt_max))
      throw InvalidSpec("alt_min must be <= alt_max");

    return run_ordered(SweepAxis::surface_area, half_widths.size(),
                       [&](std::size_t i) {
                         double const hw = half_widths[i];
                         GridBounds const b{center_lon - hw, center_lon + hw,
                                            center_lat - hw, center_lat + hw,
                                            alt_min, alt_max};
                         return run_sample(truth, GridSpec{b, grid.n_lonlat, grid.n_alt}, hw,
                                           cfg);
                       },
                       opts);
  }

} // namespace rpcfit
