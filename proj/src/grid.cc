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

#include <rpcfit/grid.h>
#include <rpcfit/error.h>
#include <rpcfit/text.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <thread>

namespace rpcfit {

  void GridBounds::validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(lon_min) || !finite(lon_max) || !finite(lat_min) || !finite(lat_max) ||
        !finite(alt_min) || !finite(alt_max))
      throw InvalidSpec("bounds must be finite");
    if (!(lon_min < lon_max))
      throw InvalidSpec("lon_min must be < lon_max");
    if (!(lat_min < lat_max))
      throw InvalidSpec("lat_min must be < lat_max");
    if (!(alt_min <= alt_max))
      throw InvalidSpec("alt_min must be <= alt_max");
  }

  bool GridBounds::contains(GroundPoint const& p, double rel_tol) const {
    auto inside = [rel_tol](double v, double lo, double hi) {
      double const slack = rel_tol * std::max({1.0, std::abs(lo), std::abs(hi)});
      return v >= lo - slack && v <= hi + slack;
    };
    return inside(p.lon, lon_min, lon_max) && inside(p.lat, lat_min, lat_max) &&
           inside(p.alt, alt_min, alt_max);
  }

  void GridSpec::validate() const {
    bounds.validate();
    if (n_lonlat < 2)
      throw InvalidSpec("grid length must be >= 2, got " + std::to_string(n_lonlat));
    if (n_alt < 2)
      throw InvalidSpec("elevation layers must be >= 2, got " + std::to_string(n_alt));
  }

  std::vector<double> linspace(double min, double max, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    if (n == 1) {
      v[0] = min;
      return v;
    }
    double const step = (max - min) / (n - 1);
    for (int i = 0; i < n; ++i)
      v[i] = min + step * i;
    v.back() = max;
    return v;
  }

  namespace {

    std::vector<GroundPoint> tensor_grid(std::vector<double> const& lons,
                                         std::vector<double> const& lats,
                                         std::vector<double> const& alts) {
      std::vector<GroundPoint> pts;
      pts.reserve(lons.size() * lats.size() * alts.size());
      for (double alt : alts)
        for (double lat : lats)
          for (double lon : lons)
            pts.push_back({lon, lat, alt});
      return pts;
    }

    std::vector<double> midpoints(std::vector<double> const& v) {
      std::vector<double> mid(v.size() - 1);
      for (std::size_t i = 0; i + 1 < v.size(); ++i)
        mid[i] = 0.5 * (v[i] + v[i + 1]);
      return mid;
    }

  } // namespace

  std::vector<GroundPoint> generate_cnp_grid(GridSpec const& spec) {
    spec.validate();
    GridBounds const& b = spec.bounds;
    return tensor_grid(linspace(b.lon_min, b.lon_max, spec.n_lonlat),
                       linspace(b.lat_min, b.lat_max, spec.n_lonlat),
                       linspace(b.alt_min, b.alt_max, spec.n_alt));
  }

  std::vector<GroundPoint> generate_ckp_grid(GridSpec const& spec) {
    spec.validate();
    GridBounds const& b = spec.bounds;
    return tensor_grid(midpoints(linspace(b.lon_min, b.lon_max, spec.n_lonlat)),
                       midpoints(linspace(b.lat_min, b.lat_max, spec.n_lonlat)),
                       midpoints(linspace(b.alt_min, b.alt_max, spec.n_alt)));
  }

  NormalizationParams normalization_from_extents(std::span<Correspondence const> points,
                                                 std::vector<std::string>* warnings) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    double lo[5] = {inf, inf, inf, inf, inf};
    double hi[5] = {-inf, -inf, -inf, -inf, -inf};
    for (Correspondence const& c : points) {
      double const v[5] = {c.ground.lon, c.ground.lat, c.ground.alt, c.image.row, c.image.col};
      for (int k = 0; k < 5; ++k) {
        lo[k] = std::min(lo[k], v[k]);
        hi[k] = std::max(hi[k], v[k]);
      }
    }
    if (points.empty())
      std::fill(std::begin(lo), std::end(lo), 0.0), std::fill(std::begin(hi), std::end(hi), 0.0);

    static constexpr char const* names[5] = {"lon", "lat", "alt", "row", "col"};
    Scaling s[5];
    for (int k = 0; k < 5; ++k) {
      bool degenerate = false;
      s[k] = Scaling::from_range(lo[k], hi[k], &degenerate);
      if (degenerate && warnings)
        warnings->push_back(std::string("constant ") + names[k] +
                            " coordinate; normalization scale set to 1");
    }
    return {s[0], s[1], s[2], s[3], s[4]};
  }

  CorrespondenceSet make_correspondence_set(std::vector<Correspondence> points) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      Correspondence const& c = points[i];
      if (!std::isfinite(c.ground.lon) || !std::isfinite(c.ground.lat) ||
          !std::isfinite(c.ground.alt) || !std::isfinite(c.image.row) ||
          !std::isfinite(c.image.col))
        throw InvalidSpec("non-finite correspondence at index " + std::to_string(i));
    }
    CorrespondenceSet set;
    set.norm = normalization_from_extents(points, &set.warnings);
    set.points = std::move(points);
    return set;
  }

  CorrespondenceSet build_correspondences(GeolocationModel const& sensor,
                                          std::span<GroundPoint const> points,
                                          int threads) {
    std::vector<Correspondence> out(points.size());
    std::size_t const n = points.size();
    std::size_t const workers =
      std::clamp<std::size_t>(threads < 1 ? 1 : static_cast<std::size_t>(threads), 1,
                              std::max<std::size_t>(n, 1));

    struct Failure {
      std::size_t index;
      std::string what;
    };
    std::vector<std::optional<Failure>> failures(workers);

    auto work = [&](std::size_t w) {
      std::size_t const begin = n * w / workers, end = n * (w + 1) / workers;
      for (std::size_t i = begin; i < end; ++i) {
        try {
          out[i] = {points[i], sensor.project(points[i])};
          if (!std::isfinite(out[i].image.row) || !std::isfinite(out[i].image.col))
            throw NumericalFailure("non-finite projection");
        } catch (std::exception const& e) {
          failures[w] = Failure{i, e.what()};
          return;
        }
      }
    };

    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back(work, w);
    }

    // Chunks are contiguous, so the first failing chunk holds the lowest index.
    for (auto const& f : failures)
      if (f)
        throw SensorProjectionError(f->index, f->what);

    return make_correspondence_set(std::move(out));
  }

  void write_correspondences_csv(CorrespondenceSet const& set, std::ostream& out) {
    out << "lon,lat,alt,row,col\n";
    for (Correspondence const& c : set.points)
      out << format_double(c.ground.lon) << ',' << format_double(c.ground.lat) << ','
          << format_double(c.ground.alt) << ',' << format_double(c.image.row) << ','
          << format_double(c.image.col) << '\n';
  }

  CorrespondenceSet read_correspondences_csv(std::istream& in) {
    std::string line;
    int line_no = 0;
    std::vector<Correspondence> pts;
    bool header = false;
    while (std::getline(in, line)) {
      ++line_no;
      std::string_view const text = trim(line);
      if (text.empty())
        continue;
      if (!header) {
        if (text != "lon,lat,alt,row,col")
          throw ParseError("line " + std::to_string(line_no) +
                           ": expected header 'lon,lat,alt,row,col'");
        header = true;
        continue;
      }
      double v[5];
      std::size_t pos = 0;
      for (int k = 0; k < 5; ++k) {
        std::size_t const comma = text.find(',', pos);
        bool const last = (k == 4);
        if (last != (comma == std::string_view::npos))
          throw ParseError("line " + std::to_string(line_no) + ": expected 5 fields");
        auto const parsed = parse_double(text.substr(pos, last ? std::string_view::npos
                                                               : comma - pos));
        if (!parsed)
          throw ParseError("line " + std::to_string(line_no) + ": bad number");
        v[k] = *parsed;
        pos = comma + 1;
      }
      pts.push_back({{v[0], v[1], v[2]}, {v[3], v[4]}});
    }
    if (!header)
      throw ParseError("missing header 'lon,lat,alt,row,col'");
    return make_correspondence_set(std::move(pts));
  }

  CorrespondenceSet read_correspondences_csv(std::filesystem::path const& path) {
    std::ifstream in(path);
    if (!in)
      throw IoError("cannot open " + path.string());
    return read_correspondences_csv(in);
  }

} // namespace rpcfit
