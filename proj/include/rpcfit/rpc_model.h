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

/// \file rpc_model.h
///
/// The rational polynomial camera model. Each image coordinate is the ratio
/// of two cubic polynomials in normalized longitude (X), latitude (Y) and
/// height (Z). Coefficients are stored in the following monomial order
/// everywhere in this library, including the text file format:
///
///    0: 1      5: ZX     10: ZYX    15: ZX^2
///    1: Z      6: YX     11: Z^2Y   16: YX^2
///    2: Y      7: X^2    12: Z^2X   17: Z^3
///    3: X      8: Y^2    13: Y^2Z   18: Y^3
///    4: ZY     9: Z^2    14: Y^2X   19: X^3

#ifndef RPCFIT_RPC_MODEL_H
#define RPCFIT_RPC_MODEL_H

#include <rpcfit/geolocation.h>

#include <array>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>

namespace rpcfit {

  inline constexpr int kNumMonomials = 20;

  using Monomials = std::array<double, kNumMonomials>;

  /// The 20 monomials of a cubic in (x, y, z) = (lon, lat, alt), normalized.
  Monomials monomials(double xn, double yn, double zn);

  /// Coefficients of one cubic polynomial.
  struct PolyCoeffs {
    std::array<double, kNumMonomials> c{};

    static PolyCoeffs constant(double value);

    double& operator[](int i) { return c[i]; }
    double operator[](int i) const { return c[i]; }

    friend bool operator==(PolyCoeffs const&, PolyCoeffs const&) = default;
  };

  double eval_poly(PolyCoeffs const& p, double xn, double yn, double zn);
  double eval_poly(PolyCoeffs const& p, Monomials const& m);

  double normalize(double v, double offset, double scale);
  double denormalize(double vn, double offset, double scale);

  /// Offset/scale pair for one variable.
  struct Scaling {
    double offset = 0.0;
    double scale = 1.0;

    double normalize(double v) const { return rpcfit::normalize(v, offset, scale); }
    double denormalize(double vn) const { return rpcfit::denormalize(vn, offset, scale); }

    /// offset = mid-range, scale = half-range. A degenerate range yields
    /// scale 1; `degenerate` is set when that happens.
    static Scaling from_range(double min, double max, bool* degenerate = nullptr);

    friend bool operator==(Scaling const&, Scaling const&) = default;
  };

  struct NormalizationParams {
    Scaling lon;   // degrees
    Scaling lat;   // degrees
    Scaling alt;   // meters
    Scaling row;   // pixels
    Scaling col;   // pixels

    /// Throws NonPositiveScale if any scale is not strictly positive.
    void validate() const;

    friend bool operator==(NormalizationParams const&, NormalizationParams const&) = default;
  };

  struct NormalizedGround {
    double x, y, z;
  };

  class RpcModel : public GeolocationModel {
  public:
    static constexpr double kDefaultDenominatorFloor = 1e-12;

    /// Identity-like default: zero numerators, unit denominators.
    RpcModel();

    /// Throws NonPositiveScale on bad normalization and
    /// std::invalid_argument if a denominator constant term is not 1 or a
    /// coefficient is non-finite.
    RpcModel(PolyCoeffs num_row, PolyCoeffs den_row,
             PolyCoeffs num_col, PolyCoeffs den_col,
             NormalizationParams norm);

    PolyCoeffs const& num_row() const { return m_num_row; }
    PolyCoeffs const& den_row() const { return m_den_row; }
    PolyCoeffs const& num_col() const { return m_num_col; }
    PolyCoeffs const& den_col() const { return m_den_col; }
    NormalizationParams const& norm() const { return m_norm; }

    NormalizedGround normalize_ground(GroundPoint const& p) const;

    /// Normalized image coordinates for a normalized ground point.
    /// Throws DenominatorNearZero when |den| < floor.
    std::pair<double, double>
    project_normalized(NormalizedGround const& g,
                       double floor = kDefaultDenominatorFloor) const;

    ImagePoint project(GroundPoint const& p) const override;
    ImagePoint project(GroundPoint const& p, double floor) const;

    /// Copy with a different normalization, same coefficients.
    RpcModel with_norm(NormalizationParams const& norm) const;

    friend bool operator==(RpcModel const& a, RpcModel const& b) {
      return a.m_num_row == b.m_num_row && a.m_den_row == b.m_den_row &&
             a.m_num_col == b.m_num_col && a.m_den_col == b.m_den_col && a.m_norm == b.m_norm;
    }

  private:
    PolyCoeffs m_num_row, m_den_row, m_num_col, m_den_col;
    NormalizationParams m_norm;
  };

  struct LocalizeOptions {
    double tolerance_px = 1e-9;
    int max_iterations = 50;
    double fd_step = 1e-7;     // normalized units
    double max_extent = 3.0;   // iterates beyond this normalized radius diverged
  };

  /// Inverse projection at a fixed height by damped Newton iteration on
  /// (lon, lat), started from the normalized center. Throws NoConvergence
  /// after the iteration cap or when the iterate leaves the model domain.
  GroundPoint localize(RpcModel const& m, ImagePoint const& pixel, double alt,
                       LocalizeOptions const& opts = {});

  // Keyword text format (KEY: value [units]).
  RpcModel read_rpc(std::istream& in);
  void write_rpc(RpcModel const& m, std::ostream& out);
  RpcModel read_rpc_file(std::filesystem::path const& path);
  void write_rpc_file(RpcModel const& m, std::filesystem::path const& path);

} // namespace rpcfit

#endif // RPCFIT_RPC_MODEL_H
