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

namespace rpcfit {

  namespace {

    struct Residual {
      double dr = 0.0, dc = 0.0;   // normalized image units
      double px = 0.0;             // pixel norm
    };

    class InverseProblem {
    public:
      InverseProblem(RpcModel const& m, ImagePoint const& target, double alt)
        : m_model(m), m_norm(m.norm()),
          m_rn(m_norm.row.normalize(target.row)),
          m_cn(m_norm.col.normalize(target.col)),
          m_zn(m_norm.alt.normalize(alt)) {}

      Residual operator()(double x, double y) const {
        auto const [rn, cn] = m_model.project_normalized({x, y, m_zn});
        Residual r;
        r.dr = rn - m_rn;
        r.dc = cn - m_cn;
        r.px = std::hypot(r.dr * m_norm.row.scale, r.dc * m_norm.col.scale);
        return r;
      }

    private:
      RpcModel const& m_model;
      NormalizationParams const& m_norm;
      double m_rn, m_cn, m_zn;
    };

  } // namespace

  GroundPoint localize(RpcModel const& m, ImagePoint const& pixel, double alt,
                       LocalizeOptions const& opts) {
    InverseProblem const f(m, pixel, alt);
    double x = 0.0, y = 0.0;
    Residual res = f(x, y);

    for (int it = 0; it < opts.max_iterations; ++it) {
      if (res.px <= opts.tolerance_px)
        return {m.norm().lon.denormalize(x), m.norm().lat.denormalize(y), alt};

      // Central differences for the 2x2 Jacobian.
      double const h = opts.fd_step;
      Residual const xp = f(x + h, y), xm = f(x - h, y);
      Residual const yp = f(x, y + h), ym = f(x, y - h);
      double const j00 = (xp.dr - xm.dr) / (2 * h), j01 = (yp.dr - ym.dr) / (2 * h);
      double const j10 = (xp.dc - xm.dc) / (2 * h), j11 = (yp.dc - ym.dc) / (2 * h);
      double const det = j00 * j11 - j01 * j10;
      if (!std::isfinite(det) || det == 0.0)
        throw NoConvergence(it + 1, res.px);

      double const dx = -( j11 * res.dr - j01 * res.dc) / det;
      double const dy = -(-j10 * res.dr + j00 * res.dc) / det;

      bool accepted = false;
      for (double lambda = 1.0; lambda > 1e-6; lambda *= 0.5) {
        double const cx = x + lambda * dx, cy = y + lambda * dy;
        if (std::hypot(cx, cy) > opts.max_extent)
          continue;
        Residual cand;
        try {
          cand = f(cx, cy);
        } catch (DenominatorNearZero const&) {
          continue;
        }
        if (cand.px < res.px) {
          x = cx;
          y = cy;
          res = cand;
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        if (res.px <= opts.tolerance_px)
          break;
        throw NoConvergence(it + 1, res.px);
      }
    }

    if (res.px <= opts.tolerance_px)
      return {m.norm().lon.denormalize(x), m.norm().lat.denormalize(y), alt};
    throw NoConvergence(opts.max_iterations, res.px);
  }

} // namespace rpcfit
