# __BEGIN_LICENSE__
#  Licensed under the Apache License, Version 2.0 (the "License"); you may
#  not use this file except in compliance with the License. You may obtain a
#  copy of the License at http://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS,
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  See the License for the specific language governing permissions and
#  limitations under the License.
# __END_LICENSE__

"""Fit rational polynomial camera (RPC) models to geolocation models.

Ground points are (lon, lat, alt) in degrees and meters; image points are
(row, col) in pixels. Reports are returned as plain dicts.
"""

from ._rpcfit import (
    CorrectedRpcSensor,
    FitConfig,
    GeolocationModel,
    GridBounds,
    GridSpec,
    PinholeSensor,
    PushbroomSensor,
    RpcfitError,
    RpcModel,
    ckp_grid,
    ckp_rmse,
    cnp_grid,
    estimate_camera_center,
    fit,
    fit_sensor,
    load_sensor,
    rotation_from_axis_angle,
    sweep_grid_length,
    sweep_surface_area,
)

__all__ = [
    "CorrectedRpcSensor",
    "FitConfig",
    "GeolocationModel",
    "GridBounds",
    "GridSpec",
    "PinholeSensor",
    "PushbroomSensor",
    "RpcfitError",
    "RpcModel",
    "ckp_grid",
    "ckp_rmse",
    "cnp_grid",
    "estimate_camera_center",
    "fit",
    "fit_sensor",
    "load_sensor",
    "rotation_from_axis_angle",
    "sweep_grid_length",
    "sweep_surface_area",
]
