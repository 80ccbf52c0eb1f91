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

#ifndef RPCFIT_GEOLOCATION_H
#define RPCFIT_GEOLOCATION_H

namespace rpcfit {

  /// Longitude and latitude in degrees, height in meters.
  struct GroundPoint {
    double lon = 0.0;
    double lat = 0.0;
    double alt = 0.0;

    friend bool operator==(GroundPoint const&, GroundPoint const&) = default;
  };

  /// Image coordinates in pixels. Row and column origins are at pixel
  /// index 0 (the center of the first pixel).
  struct ImagePoint {
    double row = 0.0;
    double col = 0.0;

    friend bool operator==(ImagePoint const&, ImagePoint const&) = default;
  };

  /// Anything that maps a ground point to the image plane. Fitting only
  /// needs this one operation, so physical sensors, corrected models and
  /// RPCs themselves are interchangeable as fitting targets.
  ///
  /// Implementations must be safe to call concurrently.
  class GeolocationModel {
  public:
    virtual ~GeolocationModel() = default;
    virtual ImagePoint project(GroundPoint const& p) const = 0;
  };

} // namespace rpcfit

#endif // RPCFIT_GEOLOCATION_H
