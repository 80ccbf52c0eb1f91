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

#include <rpcfit/fit.h>
#include <rpcfit/error.h>

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rpcfit {

  using Block = Eigen::Matrix<double, kBlockUnknowns, kBlockUnknowns>;
  using BlockVec = Eigen::Matrix<double, kBlockUnknowns, 1>;

  DesignSystem build_system(CorrespondenceSet const& data) {
    Eigen::Index const n = static_cast<Eigen::Index>(data.size());
    if (n < kMinPoints)
      throw TooFewPoints("got " + std::to_string(n) + " points, need at least " +
                         std::to_string(kMinPoints));

    DesignSystem sys;
    sys.design = Eigen::MatrixXd::Zero(2 * n, kNumUnknowns);
    sys.target.resize(2 * n);
    sys.weights = Eigen::VectorXd::Ones(2 * n);

    NormalizationParams const& norm = data.norm;
    for (Eigen::Index i = 0; i < n; ++i) {
      Correspondence const& c = data.points[static_cast<std::size_t>(i)];
      Monomials const m = monomials(norm.lon.normalize(c.ground.lon),
                                    norm.lat.normalize(c.ground.lat),
                                    norm.alt.normalize(c.ground.alt));
      double const rn = norm.row.normalize(c.image.row);
      double const cn = norm.col.normalize(c.image.col);
      for (int j = 0; j < kNumMonomials; ++j) {
        sys.design(i, j) = m[j];
        sys.design(n + i, kBlockUnknowns + j) = m[j];
      }
      for (int j = 1; j < kNumMonomials; ++j) {
        sys.design(i, kNumMonomials + j - 1) = -rn * m[j];
        sys.design(n + i, kBlockUnknowns + kNumMonomials + j - 1) = -cn * m[j];
      }
      sys.target(i) = rn;
      sys.target(n + i) = cn;
    }
    return sys;
  }

  Spectrum factorize(DesignSystem const& sys) {
    Eigen::Index const n = sys.num_points();
    Spectrum s;
    s.V.setZero();
    s.incompatible_sq = 0.0;

    for (int blk = 0; blk < 2; ++blk) {
      Eigen::Index const r0 = blk * n;
      int const c0 = blk * kBlockUnknowns;
      auto const w = sys.weights.segment(r0, n);

      Eigen::MatrixXd a = w.asDiagonal() * sys.design.block(r0, c0, n, kBlockUnknowns);
      Eigen::VectorXd rhs = w.cwiseProduct(sys.target.segment(r0, n));

      // QR first so the SVD only sees the 39x39 triangular factor.
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
      rhs.applyOnTheLeft(qr.householderQ().adjoint());
      Block const r = qr.matrixQR().topLeftCorner(kBlockUnknowns, kBlockUnknowns)
                        .triangularView<Eigen::Upper>();
      Eigen::JacobiSVD<Block> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);

      s.sigma.segment<kBlockUnknowns>(c0) = svd.singularValues();
      s.beta.segment<kBlockUnknowns>(c0) =
        svd.matrixU().transpose() * rhs.head<kBlockUnknowns>();
      s.V.block<kBlockUnknowns, kBlockUnknowns>(c0, c0) = svd.matrixV();
      s.incompatible_sq += rhs.tail(n - kBlockUnknowns).squaredNorm();
    }
    return s;
  }

  namespace {

    void require_finite(SolutionVector const& sol, char const* what) {
      if (!sol.allFinite())
        throw NumericalFailure(std::string(what) + " produced non-finite coefficients");
    }

  } // namespace

  SolutionVector solve_regularized(Spectrum const& s, double h) {
    if (!(h >= 0.0))
      throw std::invalid_argument("solve_regularized: h must be >= 0");
    SolutionVector coef;
    for (int i = 0; i < kNumUnknowns; ++i) {
      double const sg = s.sigma(i);
      coef(i) = sg > 0.0 ? sg * s.beta(i) / (sg * sg + h * h) : 0.0;
    }
    SolutionVector sol = s.V * coef;
    require_finite(sol, "regularized solve");
    return sol;
  }

  SolutionVector solve_regularized(DesignSystem const& sys, double h) {
    return solve_regularized(factorize(sys), h);
  }

  SolutionVector iccv_step(DesignSystem const& sys, SolutionVector const& prev) {
    Spectrum const s = factorize(sys);
    // With W T = U S V': (V S^2 V' + E) I = V S beta + prev.
    SolutionVector const y = s.V.transpose() * prev;
    SolutionVector coef;
    for (int i = 0; i < kNumUnknowns; ++i) {
      double const sg = s.sigma(i);
      coef(i) = (sg * s.beta(i) + y(i)) / (sg * sg + 1.0);
    }
    SolutionVector sol = s.V * coef;
    require_finite(sol, "ICCV step");
    return sol;
  }

  bool spectrum_is_degenerate(Spectrum const& s, Eigen::Index rows) {
    double const smax = s.sigma_max();
    double const tol = smax * static_cast<double>(std::max<Eigen::Index>(rows, kNumUnknowns)) *
                       std::numeric_limits<double>::epsilon();
    return !(smax > 0.0) || !(s.sigma_min() > tol);
  }

  LCurveResult lcurve_select_h(Spectrum const& s, Eigen::Index rows, int samples) {
    if (samples < 1)
      throw InvalidSpec("lcurve_samples must be positive");

    LCurveResult out;
    out.sigma_min = s.sigma_min();
    out.sigma_max = s.sigma_max();
    if (spectrum_is_degenerate(s, rows)) {
      std::ostringstream msg;
      msg << "T is rank deficient (sigma_min " << out.sigma_min << ", sigma_max "
          << out.sigma_max << ")";
      throw DegenerateSpectrum(msg.str());
    }

    double const lo = std::log(out.sigma_min), hi = std::log(out.sigma_max);
    out.curve.reserve(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k) {
      double h;
      if (samples == 1 || k == samples - 1)
        h = out.sigma_max;
      else if (k == 0)
        h = out.sigma_min;
      else
        h = std::exp(lo + (hi - lo) * k / (samples - 1));

      // Curve (0.5 ln rho, 0.5 ln eta) with rho = |W T I - W G|^2 and
      // eta = |I|^2, differentiated analytically in t = ln h.
      double const h2 = h * h;
      double rho = s.incompatible_sq, drho = 0.0, ddrho = 0.0;
      double eta = 0.0, deta = 0.0, ddeta = 0.0;
      for (int i = 0; i < kNumUnknowns; ++i) {
        double const sg = s.sigma(i), b = s.beta(i);
        double const f = sg * sg / (sg * sg + h2);
        double const df = -2.0 * f * (1.0 - f);
        double const ddf = 4.0 * f * (1.0 - f) * (1.0 - 2.0 * f);
        double const xi2 = b * b / (sg * sg);
        eta += f * f * xi2;
        deta += 2.0 * f * df * xi2;
        ddeta += 2.0 * (df * df + f * ddf) * xi2;
        rho += (1.0 - f) * (1.0 - f) * b * b;
        drho += -2.0 * (1.0 - f) * df * b * b;
        ddrho += 2.0 * (df * df - (1.0 - f) * ddf) * b * b;
      }
      double const x1 = drho / (2.0 * rho);
      double const x2 = (ddrho * rho - drho * drho) / (2.0 * rho * rho);
      double const y1 = deta / (2.0 * eta);
      double const y2 = (ddeta * eta - deta * deta) / (2.0 * eta * eta);
      double const kappa = (x1 * y2 - x2 * y1) / std::pow(x1 * x1 + y1 * y1, 1.5);

      out.curve.push_back({h, 0.5 * std::log(rho), 0.5 * std::log(eta), kappa});
    }

    // Scan from the largest h so that ties keep the larger value.
    double best = -std::numeric_limits<double>::infinity();
    out.h = out.sigma_max;
    for (auto it = out.curve.rbegin(); it != out.curve.rend(); ++it) {
      if (std::isfinite(it->curvature) && it->curvature > best) {
        best = it->curvature;
        out.h = it->h;
      }
    }
    return out;
  }

  LCurveResult lcurve_select_h(DesignSystem const& sys, int samples) {
    if (!(sys.weights.array() == 1.0).all())
      throw std::invalid_argument("lcurve_select_h: L-curve is defined for identity weights");
    return lcurve_select_h(factorize(sys), sys.design.rows(), samples);
  }

  DesignSystem update_weights(DesignSystem sys, SolutionVector const& sol, double floor) {
    if (!sol.allFinite())
      throw NumericalFailure("update_weights: non-finite solution");
    Eigen::Index const n = sys.num_points();
    auto const b_tail = sol.segment<kNumMonomials - 1>(kNumMonomials);
    auto const f_tail = sol.segment<kNumMonomials - 1>(kBlockUnknowns + kNumMonomials);
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Matrix<double, 1, kNumMonomials> const m = sys.monomials(i);
      double const b = 1.0 + m.tail<kNumMonomials - 1>().dot(b_tail.transpose());
      double const f = 1.0 + m.tail<kNumMonomials - 1>().dot(f_tail.transpose());
      if (!(std::abs(b) >= floor))
        throw DenominatorNearZero("row", b, static_cast<std::size_t>(i));
      if (!(std::abs(f) >= floor))
        throw DenominatorNearZero("col", f, static_cast<std::size_t>(i));
      sys.weights(i) = 1.0 / b;
      sys.weights(n + i) = 1.0 / f;
    }
    return sys;
  }

  RpcModel unpack_solution(SolutionVector const& sol, NormalizationParams const& norm) {
    PolyCoeffs a, b, e, f;
    b[0] = 1.0;
    f[0] = 1.0;
    for (int j = 0; j < kNumMonomials; ++j) {
      a[j] = sol(j);
      e[j] = sol(kBlockUnknowns + j);
    }
    for (int j = 1; j < kNumMonomials; ++j) {
      b[j] = sol(kNumMonomials + j - 1);
      f[j] = sol(kBlockUnknowns + kNumMonomials + j - 1);
    }
    return RpcModel(a, b, e, f, norm);
  }

  SolutionVector pack_model(RpcModel const& m) {
    SolutionVector sol;
    for (int j = 0; j < kNumMonomials; ++j) {
      sol(j) = m.num_row()[j];
      sol(kBlockUnknowns + j) = m.num_col()[j];
    }
    for (int j = 1; j < kNumMonomials; ++j) {
      sol(kNumMonomials + j - 1) = m.den_row()[j];
      sol(kBlockUnknowns + kNumMonomials + j - 1) = m.den_col()[j];
    }
    return sol;
  }

  double RmsePair::combined() const {
    return std::sqrt(0.5 * (row * row + col * col));
  }

  RmsePair correspondence_rmse(RpcModel const& m, CorrespondenceSet const& data, double floor) {
    double sr = 0.0, sc = 0.0;
    for (Correspondence const& c : data.points) {
      ImagePoint const p = m.project(c.ground, floor);
      sr += (p.row - c.image.row) * (p.row - c.image.row);
      sc += (p.col - c.image.col) * (p.col - c.image.col);
    }
    double const n = static_cast<double>(std::max<std::size_t>(data.size(), 1));
    return {std::sqrt(sr / n), std::sqrt(sc / n)};
  }

  void FitConfig::validate() const {
    if (!(rmse_tolerance > 0.0) || max_wls_iterations <= 0 || max_iccv_iterations <= 0 ||
        lcurve_samples <= 0 || !(denominator_floor > 0.0))
      throw InvalidSpec("fit configuration values must all be positive");
  }

  namespace {

    void check_geometry(CorrespondenceSet const& data) {
      auto spans = [&](auto get) {
        auto [lo, hi] = std::minmax_element(
          data.points.begin(), data.points.end(),
          [&](Correspondence const& a, Correspondence const& b) { return get(a) < get(b); });
        return get(*lo) < get(*hi);
      };
      if (!spans([](Correspondence const& c) { return c.ground.lon; }))
        throw DegenerateGeometry("all points share one longitude");
      if (!spans([](Correspondence const& c) { return c.ground.lat; }))
        throw DegenerateGeometry("all points share one latitude");
      if (!spans([](Correspondence const& c) { return c.ground.alt; }))
        throw DegenerateGeometry("all points share one altitude; height terms are unidentifiable");
    }

    class IterateTracker {
    public:
      IterateTracker(CorrespondenceSet const& data, FitConfig const& cfg)
        : m_data(data), m_cfg(cfg) {}

      /// Evaluates and records an iterate. Returns its RMSE.
      RmsePair record(SolutionVector const& sol, char const* phase, int iteration) {
        RpcModel model = unpack_solution(sol, m_data.norm);
        RmsePair const rmse = correspondence_rmse(model, m_data, m_cfg.denominator_floor);
        if (!std::isfinite(rmse.combined()))
          throw NumericalFailure("non-finite RMSE");
        if (!m_best || rmse.combined() < m_best_rmse.combined()) {
          m_best = std::move(model);
          m_best_sol = sol;
          m_best_rmse = rmse;
          m_best_phase = phase;
          m_best_iteration = iteration;
        }
        return rmse;
      }

      bool has_best() const { return m_best.has_value(); }
      RpcModel const& best_model() const { return *m_best; }
      SolutionVector const& best_solution() const { return m_best_sol; }
      RmsePair best_rmse() const { return m_best_rmse; }
      std::string const& best_phase() const { return m_best_phase; }
      int best_iteration() const { return m_best_iteration; }

    private:
      CorrespondenceSet const& m_data;
      FitConfig const& m_cfg;
      std::optional<RpcModel> m_best;
      SolutionVector m_best_sol;
      RmsePair m_best_rmse;
      std::string m_best_phase;
      int m_best_iteration = 0;
    };

  } // namespace

  FitResult fit_rpc(CorrespondenceSet const& data, FitConfig const& cfg) {
    cfg.validate();
    if (data.size() < static_cast<std::size_t>(kMinPoints))
      throw TooFewPoints("got " + std::to_string(data.size()) + " points, need at least " +
                         std::to_string(kMinPoints));
    check_geometry(data);

    FitReport report;
    report.warnings = data.warnings;

    DesignSystem sys = build_system(data);
    Spectrum const spectrum = factorize(sys);
    report.sigma_min = spectrum.sigma_min();
    report.sigma_max = spectrum.sigma_max();
    if (!(report.sigma_max <= 1e15 * report.sigma_min))
      report.warnings.push_back("condition number of T exceeds 1e15");

    try {
      report.chosen_h = lcurve_select_h(spectrum, sys.design.rows(), cfg.lcurve_samples).h;
    } catch (DegenerateSpectrum const& e) {
      report.chosen_h = report.sigma_max * 1e-8;
      report.lcurve_fallback = true;
      report.warnings.push_back(std::string(e.what()) + "; using h = 1e-8 * sigma_max");
    }
    double const h = report.chosen_h;

    IterateTracker tracker(data, cfg);
    SolutionVector sol = solve_regularized(spectrum, h);
    try {
      report.wls_rmse_trace.push_back(tracker.record(sol, "wls", 0));
    } catch (DenominatorNearZero const& e) {
      throw NumericalFailure(std::string("initial solution unusable: ") + e.what());
    }

    auto stop_early = [&](std::exception const& e, char const* phase) {
      report.warnings.push_back(std::string(phase) + " stopped early: " + e.what());
    };

    bool stopped = false;
    double prev = report.wls_rmse_trace.back().combined();
    for (int it = 1; it <= cfg.max_wls_iterations; ++it) {
      try {
        sys = update_weights(sys, sol, cfg.denominator_floor);
        sol = solve_regularized(sys, h);
        report.wls_rmse_trace.push_back(tracker.record(sol, "wls", it));
      } catch (DenominatorNearZero const& e) {
        stop_early(e, "weighted iterations");
        stopped = true;
        break;
      } catch (NumericalFailure const& e) {
        stop_early(e, "weighted iterations");
        stopped = true;
        break;
      }
      report.wls_iterations = it;
      double const cur = report.wls_rmse_trace.back().combined();
      if (std::abs(prev - cur) < cfg.rmse_tolerance)
        break;
      prev = cur;
    }

    if (!stopped) {
      SolutionVector iccv = tracker.best_solution();
      prev = tracker.best_rmse().combined();
      for (int k = 1; k <= cfg.max_iccv_iterations; ++k) {
        try {
          sys = update_weights(sys, iccv, cfg.denominator_floor);
          iccv = iccv_step(sys, iccv);
          report.iccv_rmse_trace.push_back(tracker.record(iccv, "iccv", k));
        } catch (DenominatorNearZero const& e) {
          stop_early(e, "ICCV iterations");
          break;
        } catch (NumericalFailure const& e) {
          stop_early(e, "ICCV iterations");
          break;
        }
        report.iccv_iterations = k;
        double const cur = report.iccv_rmse_trace.back().combined();
        if (std::abs(prev - cur) < cfg.rmse_tolerance)
          break;
        prev = cur;
      }
    }

    report.final_cnp_rmse = tracker.best_rmse();
    report.best_phase = tracker.best_phase();
    report.best_iteration = tracker.best_iteration();
    return {tracker.best_model(), std::move(report)};
  }

} // namespace rpcfit
