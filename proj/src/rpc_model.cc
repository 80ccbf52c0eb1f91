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

#include <rpcfit/rpc_model.h>
#include <rpcfit/error.h>

#include <cmath>
#include <stdexcept>

namespace rpcfit {

  Monomials monomials(double x, double y, double z) {
    return {1.0,
            z, y, x,
            z * y, z * x, y * x,
            x * x, y * y, z * z,
            z * y * x,
            z * z * y, z * z * x,
            y * y * z, y * y * x,
            z * x * x, y * x * x,
            z * z * z, y * y * y, x * x * x};
  }

  PolyCoeffs PolyCoeffs::constant(double value) {
    PolyCoeffs p;
    p.c[0] = value;
    return p;
  }

  double eval_poly(PolyCoeffs const& p, Monomials const& m) {
    double sum = 0.0;
    for (int i = 0; i < kNumMonomials; ++i)
      sum += p.c[i] * m[i];
    return sum;
  }

  double eval_poly(PolyCoeffs const& p, double xn, double yn, double zn) {
    return eval_poly(p, monomials(xn, yn, zn));
  }

  double normalize(double v, double offset, double scale) {
    if (!(scale > 0.0))
      throw NonPositiveScale("scale " + std::to_string(scale));
    return (v - offset) / scale;
  }

  double denormalize(double vn, double offset, double scale) {
    if (!(scale > 0.0))
      throw NonPositiveScale("scale " + std::to_string(scale));
    return vn * scale + offset;
  }

  Scaling Scaling::from_range(double min, double max, bool* degenerate) {
    Scaling s;
    s.offset = 0.5 * (min + max);
    s.scale = 0.5 * (max - min);
    bool const flat = !(s.scale > 0.0);
    if (flat)
      s.scale = 1.0;
    if (degenerate)
      *degenerate = flat;
    return s;
  }

  void NormalizationParams::validate() const {
    auto check = [](Scaling const& s, char const* name) {
      if (!(s.scale > 0.0) || !std::isfinite(s.scale))
        throw NonPositiveScale(std::string(name) + " scale " + std::to_string(s.scale));
      if (!std::isfinite(s.offset))
        throw NonPositiveScale(std::string(name) + " offset is not finite");
    };
    check(lon, "lon");
    check(lat, "lat");
    check(alt, "alt");
    check(row, "row");
    check(col, "col");
  }

  RpcModel::RpcModel()
    : m_den_row(PolyCoeffs::constant(1.0)), m_den_col(PolyCoeffs::constant(1.0)) {}

  RpcModel::RpcModel(PolyCoeffs num_row, PolyCoeffs den_row,
                     PolyCoeffs num_col, PolyCoeffs den_col,
                     NormalizationParams norm)
    : m_num_row(num_row), m_den_row(den_row),
      m_num_col(num_col), m_den_col(den_col), m_norm(norm) {
    m_norm.validate();
    if (m_den_row[0] != 1.0 || m_den_col[0] != 1.0)
      throw std::invalid_argument("RpcModel: denominator constant terms must be 1");
    for (PolyCoeffs const* p : {&m_num_row, &m_den_row, &m_num_col, &m_den_col})
      for (double v : p->c)
        if (!std::isfinite(v))
          throw std::invalid_argument("RpcModel: non-finite coefficient");
  }

  NormalizedGround RpcModel::normalize_ground(GroundPoint const& p) const {
    return {m_norm.lon.normalize(p.lon),
            m_norm.lat.normalize(p.lat),
            m_norm.alt.normalize(p.alt)};
  }

  std::pair<double, double>
  RpcModel::project_normalized(NormalizedGround const& g, double floor) const {
    Monomials const m = monomials(g.x, g.y, g.z);
    double const b = eval_poly(m_den_row, m);
    if (!(std::abs(b) >= floor))
      throw DenominatorNearZero("row", b);
    double const f = eval_poly(m_den_col, m);
    if (!(std::abs(f) >= floor))
      throw DenominatorNearZero("col", f);
    return {eval_poly(m_num_row, m) / b, eval_poly(m_num_col, m) / f};
  }

  ImagePoint RpcModel::project(GroundPoint const& p) const {
    return project(p, kDefaultDenominatorFloor);
  }

  ImagePoint RpcModel::project(GroundPoint const& p, double floor) const {
    auto const [rn, cn] = project_normalized(normalize_ground(p), floor);
    return {m_norm.row.denormalize(rn), m_norm.col.denormalize(cn)};
  }

  RpcModel RpcModel::with_norm(NormalizationParams const& norm) const {
    return RpcModel(m_num_row, m_den_row, m_num_col, m_den_col, norm);
  }

} // namespace rpcfit
