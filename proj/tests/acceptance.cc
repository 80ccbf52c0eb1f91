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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include "oracles.h"

#include <rpcfit/error.h>
#include <rpcfit/eval.h>
#include <rpcfit/fit.h>
#include <rpcfit/sensors.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

using namespace rpcfit;

namespace {

  struct Outcome {
    bool pass = true;
    std::string detail;
  };

  using Clock = std::chrono::steady_clock;

  double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  }

  GridBounds const kScene{2.25, 2.45, 48.75, 48.95, -500.0, 500.0};

  std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
  }

  double worst(RmseResult const& r) {
    return std::max(r.row_rmse, r.col_rmse);
  }

  double sample_rmse(SweepSample const& s) {
    return s.ok() ? worst(*s.rmse) : std::numeric_limits<double>::infinity();
  }

  RpcModel random_truth(unsigned seed) {
    std::mt19937_64 rng(seed);
    return oracle::random_rpc(rng, oracle::paris_norm());
  }

  GridBounds paris_bounds() {
    NormalizationParams const n = oracle::paris_norm();
    return {n.lon.offset - n.lon.scale, n.lon.offset + n.lon.scale,
            n.lat.offset - n.lat.scale, n.lat.offset + n.lat.scale,
            n.alt.offset - n.alt.scale, n.alt.offset + n.alt.scale};
  }

  Outcome exact_recovery() {
    Outcome out;
    double max_rmse = 0.0, max_time = 0.0;
    for (unsigned seed = 1; seed <= 5; ++seed) {
      auto const t0 = Clock::now();
      SensorFit const s = fit_to_sensor(random_truth(seed), {paris_bounds(), 20, 10});
      max_time = std::max(max_time, seconds_since(t0));
      max_rmse = std::max(max_rmse, worst(s.ckp));
    }
    out.pass = max_rmse < 1e-8 && max_time < 10.0;
    out.detail = "5 random models, worst CKP RMSE " + fmt(max_rmse) + " px, slowest fit " +
                 fmt(max_time) + " s";

    FitConfig uncapped;
    uncapped.max_iccv_iterations = 1000;
    double max_uncapped = 0.0;
    for (unsigned seed = 1; seed <= 5; ++seed)
      max_uncapped = std::max(
        max_uncapped, worst(fit_to_sensor(random_truth(seed), {paris_bounds(), 20, 10}, uncapped).ckp));
    out.detail += "; with max_iccv_iterations=1000: " + fmt(max_uncapped) + " px";
    return out;
  }

  Outcome sensor_accuracy() {
    PinholeSensor const pin = PinholeSensor::looking_down(
      LocalFrame::centered_on(kScene), {300.0, -200.0, 600e3}, 1.2e6, {5000.0, 5000.0},
      {0.01, -0.02, 0.3});
    PushbroomSensor const pb = PushbroomSensor::over_scene(kScene, 600e3, 0.5, 7500.0,
                                                           {0.002, -0.001, 0.01});
    Outcome out;
    for (auto const& [name, sensor] :
         {std::pair<char const*, GeolocationModel const*>{"pinhole", &pin}, {"pushbroom", &pb}}) {
      auto const t0 = Clock::now();
      SensorFit const s = fit_to_sensor(*sensor, {kScene, 50, 10}, {}, 4);
      double const t = seconds_since(t0);
      out.pass = out.pass && worst(s.ckp) <= 1e-4 && t < 30.0;
      out.detail += std::string(out.detail.empty() ? "" : ", ") + name + " " +
                    fmt(s.ckp.row_rmse) + "/" + fmt(s.ckp.col_rmse) + " px in " + fmt(t) + " s";
    }
    return out;
  }

  PushbroomSensor pushbroom() {
    return PushbroomSensor::over_scene(kScene, 600e3, 0.5, 7500.0, {0.002, -0.001, 0.01});
  }

  Outcome grid_plateau() {
    std::vector<int> const lengths{5, 10, 20, 40};
    SweepOptions opts;
    opts.threads = 4;
    SweepResult const r = sweep_grid_length(pushbroom(), kScene, lengths, 10, {}, opts);
    double const r10 = sample_rmse(r.samples[1]), r20 = sample_rmse(r.samples[2]),
                 r40 = sample_rmse(r.samples[3]);
    Outcome out;
    out.pass = r10 <= 10.0 * r40 && r20 <= 2.0 * r40;
    std::ostringstream d;
    d << "RMSE n=5/10/20/40: " << fmt(sample_rmse(r.samples[0])) << " / " << fmt(r10) << " / "
      << fmt(r20) << " / " << fmt(r40) << " px";
    out.detail = d.str();
    return out;
  }

  Outcome area_trend() {
    std::vector<double> const widths{0.02, 0.05, 0.1, 0.3};
    SweepOptions opts;
    opts.threads = 4;
    GridBounds const largest{2.35 - widths.back(), 2.35 + widths.back(),
                             48.85 - widths.back(), 48.85 + widths.back(), -500.0, 500.0};
    PushbroomSensor const sensor =
      PushbroomSensor::over_scene(largest, 600e3, 0.5, 7500.0, {0.002, -0.001, 0.01});
    SweepResult const r =
      sweep_surface_area(sensor, 2.35, 48.85, widths, -500.0, 500.0, {}, opts);
    Outcome out;
    out.pass = sample_rmse(r.samples.back()) >= sample_rmse(r.samples.front()) &&
               std::isfinite(sample_rmse(r.samples.back()));
    out.detail = "RMSE by half width:";
    for (SweepSample const& s : r.samples)
      out.detail += " " + fmt(s.param) + "deg=" + fmt(sample_rmse(s));
    return out;
  }

  Outcome corrected_workflow() {
    SensorFit const base_fit = fit_to_sensor(pushbroom(), {kScene, 50, 10}, {}, 4);
    RpcModel const& base = base_fit.fit.model;
    LocalFrame const frame = LocalFrame::centered_on(kScene);
    GridSpec const spec{kScene, 50, 10};

    RigidCorrection corr;
    corr.R = rotation_from_axis_angle(Eigen::Vector3d(0.6e-3, -0.8e-3, 0.0));
    corr.T = Eigen::Vector3d(3.0, 4.0, 0.0);
    corr.C = estimate_camera_center(base, kScene, frame);
    CorrectedRpcSensor const moved(base, corr, frame);
    SensorFit const s = fit_to_sensor(moved, spec, {}, 4);

    CorrectedRpcSensor const same(base, RigidCorrection{}, frame);
    SensorFit const id = fit_to_sensor(same, spec, {}, 4);
    auto const ckp = generate_ckp_grid(spec);
    RmseResult const vs_base = ckp_rmse(id.fit.model, base, ckp);

    Outcome out;
    out.pass = worst(s.ckp) <= 1e-4 && worst(vs_base) <= 1e-8;
    out.detail = "corrected sensor CKP RMSE " + fmt(worst(s.ckp)) +
                 " px; identity correction vs base " + fmt(worst(vs_base)) + " px";
    return out;
  }

  CorrespondenceSet random_fitting_data(unsigned seed) {
    std::mt19937_64 rng(seed);
    RpcModel const truth = oracle::random_rpc(rng, oracle::paris_norm());
    std::uniform_int_distribution<int> n(7, 12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double const noise = u(rng) < 0.5 ? 0.0 : std::pow(10.0, -4.0 + 3.0 * u(rng));
    GridSpec const spec{paris_bounds(), n(rng), 4 + n(rng) % 4};
    auto const pts = generate_cnp_grid(spec);
    CorrespondenceSet data = build_correspondences(truth, pts);
    std::normal_distribution<double> g(0.0, noise);
    if (noise > 0.0)
      for (Correspondence& c : data.points) {
        c.image.row += g(rng);
        c.image.col += g(rng);
      }
    return data;
  }

  Outcome lcurve_containment() {
    Outcome out;
    int outside = 0, too_far = 0;
    double worst_ratio = 0.0;
    for (unsigned seed = 100; seed < 200; ++seed) {
      CorrespondenceSet const data = random_fitting_data(seed);
      DesignSystem const sys = build_system(data);
      Spectrum const spec = factorize(sys);
      LCurveResult const lc = lcurve_select_h(spec, sys.design.rows());
      if (lc.h < lc.sigma_min || lc.h > lc.sigma_max)
        ++outside;
      double best = std::numeric_limits<double>::infinity(), chosen = 0.0;
      for (LCurvePoint const& p : lc.curve) {
        double const rmse =
          correspondence_rmse(unpack_solution(solve_regularized(spec, p.h), data.norm), data)
            .combined();
        best = std::min(best, rmse);
        if (p.h == lc.h)
          chosen = rmse;
      }
      double const ratio = chosen / best;
      worst_ratio = std::max(worst_ratio, ratio);
      if (!(ratio <= 10.0))
        ++too_far;
    }
    out.pass = outside == 0 && too_far == 0;
    out.detail = "100 systems: " + std::to_string(outside) + " outside [smin, smax], " +
                 std::to_string(too_far) + " beyond 10x; worst chosen/best RMSE " +
                 fmt(worst_ratio);
    return out;
  }

  Outcome iccv_consistency() {
    Outcome out;
    int violations = 0;
    for (unsigned seed = 300; seed < 320; ++seed) {
      RpcModel const truth = random_truth(seed);
      auto const pts = generate_cnp_grid({paris_bounds(), 12, 6});
      CorrespondenceSet const data = build_correspondences(truth, pts);
      FitResult const r = fit_rpc(data);
      double best_wls = std::numeric_limits<double>::infinity();
      for (RmsePair const& p : r.report.wls_rmse_trace)
        best_wls = std::min(best_wls, p.combined());
      double const final_rmse = r.report.final_cnp_rmse.combined();
      double const recomputed = correspondence_rmse(r.model, data).combined();
      if (final_rmse > best_wls || recomputed != final_rmse)
        ++violations;
    }
    out.pass = violations == 0;
    out.detail = "20 exact-data fits, " + std::to_string(violations) + " violations";
    return out;
  }

  Outcome identity_suite() {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    RpcModel const m = oracle::random_rpc(rng, oracle::paris_norm());
    GridBounds const b = paris_bounds();
    double e_poly = 0.0, e_eq = 0.0, e_norm = 0.0, e_file = 0.0, e_loc = 0.0;

    for (int i = 0; i < 200; ++i) {
      double const x = u(rng), y = u(rng), z = u(rng);
      double const mine = eval_poly(m.num_row(), x, y, z);
      double const ref = oracle::poly(m.num_row(), x, y, z);
      e_poly = std::max(e_poly, std::abs(mine - ref) / std::max(1.0, std::abs(ref)));
    }

    auto const pts = generate_cnp_grid({b, 8, 5});
    CorrespondenceSet data = build_correspondences(m, pts);
    std::normal_distribution<double> g(0.0, 0.5);
    for (Correspondence& c : data.points) {
      c.image.row += g(rng);
      c.image.col += g(rng);
    }
    RpcModel const other = oracle::random_rpc(rng, data.norm);
    DesignSystem const sys = update_weights(build_system(data), pack_model(other));
    Eigen::VectorXd const weighted =
      sys.weights.cwiseProduct(sys.design * pack_model(other) - sys.target);
    Eigen::Index const n = sys.num_points();
    for (Eigen::Index i = 0; i < n; ++i) {
      auto const& c = data.points[i];
      NormalizedGround const ng = other.normalize_ground(c.ground);
      auto const [rn, cn] = other.project_normalized(ng);
      double const dr = rn - data.norm.row.normalize(c.image.row);
      double const dc = cn - data.norm.col.normalize(c.image.col);
      e_eq = std::max({e_eq, std::abs(std::abs(weighted(i)) - std::abs(dr)),
                       std::abs(std::abs(weighted(n + i)) - std::abs(dc))});
    }

    NormalizationParams const norm = oracle::paris_norm();
    for (int i = 0; i < 200; ++i) {
      double const v = norm.alt.offset + norm.alt.scale * 3.0 * u(rng);
      e_norm = std::max(e_norm, std::abs(norm.alt.denormalize(norm.alt.normalize(v)) - v) /
                                  std::max(1.0, std::abs(v)));
    }

    auto const dir = oracle::temp_dir("acceptance");
    write_rpc_file(m, dir / "m.rpc");
    RpcModel const back = read_rpc_file(dir / "m.rpc");
    std::filesystem::remove_all(dir);
    auto const ckp = generate_ckp_grid({b, 10, 5});
    e_file = worst(ckp_rmse(back, m, ckp));
    for (GroundPoint const& p : ckp)
      e_file = std::max({e_file, std::abs(back.project(p).row - m.project(p).row),
                         std::abs(back.project(p).col - m.project(p).col)});

    RpcModel const cam = oracle::camera_like_rpc(rng, oracle::paris_norm());
    for (GroundPoint const& p : ckp) {
      ImagePoint const px = cam.project(p);
      ImagePoint const again = cam.project(localize(cam, px, p.alt));
      e_loc = std::max({e_loc, std::abs(again.row - px.row), std::abs(again.col - px.col)});
    }

    Outcome out;
    out.pass = e_poly <= 1e-12 && e_eq <= 1e-12 && e_norm <= 1e-12 && e_file <= 1e-10 &&
               e_loc <= 1e-9;
    out.detail = "poly " + fmt(e_poly) + ", weighted residual " + fmt(e_eq) +
                 ", normalization " + fmt(e_norm) + ", file " + fmt(e_file) +
                 " px, localize " + fmt(e_loc) + " px";
    return out;
  }

} // namespace

int main() {
  std::vector<std::pair<char const*, std::function<Outcome()>>> const criteria{
    {"exact-representability recovery", exact_recovery},
    {"accuracy on pinhole and pushbroom sensors", sensor_accuracy},
    {"grid-length plateau", grid_plateau},
    {"surface-area growth trend", area_trend},
    {"corrected RPC workflow", corrected_workflow},
    {"L-curve containment", lcurve_containment},
    {"ICCV best-iterate consistency", iccv_consistency},
    {"numerical identity suite", identity_suite},
  };

  int failures = 0;
  int index = 1;
  for (auto const& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (std::exception const& e) {
      o = {false, std::string("threw ") + e.what()};
    }
    failures += !o.pass;
    std::printf("criterion %d %s: %s (%s)\n", index++, o.pass ? "PASS" : "FAIL", name,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
