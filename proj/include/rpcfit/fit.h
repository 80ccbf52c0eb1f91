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

/// \file fit.h
///
/// Least-squares estimation of RPC coefficients from correspondences.
///
/// For N points with normalized coordinates (X, Y, Z, r, c) the linearized
/// system is W (T I - G) = 0 where
///
///   T = block-diag[M_r, M_c]                     (2N x 78)
///   M_r row i = [m(X_i), -r_i * m(X_i)[1..19]]    (m = the 20 monomials)
///   M_c row i = [m(X_i), -c_i * m(X_i)[1..19]]
///   G = [r_1..r_N, c_1..c_N]
///   W = diag[1/b(X_i)..., 1/f(X_i)...]
///   I = [a_0..a_19, b_1..b_19, e_0..e_19, f_1..f_19]
///
/// The fit selects a ridge parameter h on the unweighted system with the
/// L-curve corner, iterates weighted ridge solves, then runs de-biasing
/// iterations (T'W^2T + E) I_k = T'W^2G + I_{k-1}. The iterate with the
/// lowest pixel RMSE on the fitting data is returned.

#ifndef RPCFIT_FIT_H
#define RPCFIT_FIT_H

#include <rpcfit/grid.h>
#include <rpcfit/rpc_model.h>

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace rpcfit {

  inline constexpr int kNumUnknowns = 78;
  inline constexpr int kBlockUnknowns = 39;
  inline constexpr int kMinPoints = kBlockUnknowns;

  using SolutionVector = Eigen::Matrix<double, kNumUnknowns, 1>;

  struct DesignSystem {
    Eigen::MatrixXd design;    // T, 2N x 78
    Eigen::VectorXd target;    // G, 2N
    Eigen::VectorXd weights;   // diagonal of W, 2N

    Eigen::Index num_points() const { return target.size() / 2; }

    /// The 20 monomials of point i (the first 20 columns of row i of T).
    Eigen::Matrix<double, 1, kNumMonomials> monomials(Eigen::Index i) const {
      return design.block<1, kNumMonomials>(i, 0);
    }
  };

  /// T and G from normalized correspondences, with W = identity.
  /// Throws TooFewPoints when fewer than 39 points are given.
  DesignSystem build_system(CorrespondenceSet const& data);

  /// Singular value decomposition of W T, kept in the block form
  /// (singular values of both blocks, V block-diagonal).
  struct Spectrum {
    Eigen::Matrix<double, kNumUnknowns, 1> sigma;                // singular values
    Eigen::Matrix<double, kNumUnknowns, 1> beta;                 // U' (W G)
    Eigen::Matrix<double, kNumUnknowns, kNumUnknowns> V;         // right singular vectors
    double incompatible_sq = 0.0;   // |W G|^2 outside the range of W T

    double sigma_min() const { return sigma.minCoeff(); }
    double sigma_max() const { return sigma.maxCoeff(); }
  };

  Spectrum factorize(DesignSystem const& sys);

  /// Minimizer of |W (T I - G)|^2 + h^2 |I|^2.
  /// Throws NumericalFailure if the result is not finite.
  SolutionVector solve_regularized(DesignSystem const& sys, double h);
  SolutionVector solve_regularized(Spectrum const& s, double h);

  struct LCurvePoint {
    double h;
    double log_residual;   // ln |W T I_h - W G|
    double log_solution;   // ln |I_h|
    double curvature;      // signed, positive at the corner
  };

  struct LCurveResult {
    double h = 0.0;
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    std::vector<LCurvePoint> curve;   // ascending h
  };

  /// Ridge parameter at the point of maximal curvature of the L-curve,
  /// sampled log-uniformly over [sigma_min, sigma_max] of T using the
  /// closed-form SVD expressions. Ties go to the larger h.
  ///
  /// Throws DegenerateSpectrum when T is numerically rank deficient.
  /// The DesignSystem overload requires identity weights.
  LCurveResult lcurve_select_h(DesignSystem const& sys, int samples = 100);
  LCurveResult lcurve_select_h(Spectrum const& s, Eigen::Index rows, int samples = 100);

  /// Numerical rank threshold used for DegenerateSpectrum.
  bool spectrum_is_degenerate(Spectrum const& s, Eigen::Index rows);

  /// Copy of `sys` with W = diag[1/b(X_i), 1/f(X_i)] from the denominators
  /// of `sol`. Throws DenominatorNearZero(index) below `floor`.
  DesignSystem update_weights(DesignSystem sys, SolutionVector const& sol,
                              double floor = RpcModel::kDefaultDenominatorFloor);

  /// One de-biasing iteration: solves (T'W^2T + E) I = T'W^2G + prev.
  SolutionVector iccv_step(DesignSystem const& sys, SolutionVector const& prev);

  RpcModel unpack_solution(SolutionVector const& sol, NormalizationParams const& norm);
  SolutionVector pack_model(RpcModel const& m);

  struct RmsePair {
    double row = 0.0;
    double col = 0.0;

    /// Root of the mean over all 2N residuals.
    double combined() const;
  };

  /// Pixel RMSE of `m` against the correspondences, per axis.
  RmsePair correspondence_rmse(RpcModel const& m, CorrespondenceSet const& data,
                               double floor = RpcModel::kDefaultDenominatorFloor);

  struct FitConfig {
    double rmse_tolerance = 1e-10;   // pixels
    int max_wls_iterations = 20;
    int max_iccv_iterations = 20;
    int lcurve_samples = 100;
    double denominator_floor = RpcModel::kDefaultDenominatorFloor;

    /// Throws InvalidSpec unless every field is positive.
    void validate() const;
  };

  struct FitReport {
    double chosen_h = 0.0;
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    bool lcurve_fallback = false;
    std::vector<RmsePair> wls_rmse_trace;    // entry 0 is the unweighted solution
    std::vector<RmsePair> iccv_rmse_trace;
    RmsePair final_cnp_rmse;
    std::optional<RmsePair> final_ckp_rmse;
    int wls_iterations = 0;
    int iccv_iterations = 0;
    std::string best_phase;   // "wls" or "iccv"
    int best_iteration = 0;
    std::vector<std::string> warnings;
  };

  struct FitResult {
    RpcModel model;
    FitReport report;
  };

  /// Throws TooFewPoints, DegenerateGeometry (fewer than two distinct
  /// values of lon, lat or alt), InvalidSpec for a bad config, and
  /// NumericalFailure if the initial solve breaks down.
  FitResult fit_rpc(CorrespondenceSet const& data, FitConfig const& cfg = {});

} // namespace rpcfit

#endif // RPCFIT_FIT_H
