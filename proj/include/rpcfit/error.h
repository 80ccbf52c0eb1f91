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

/// \file error.h
///
/// Exception types thrown by the library. Every error carries a stable
/// name() so that front ends (CLI, Python) can report which failure
/// occurred without parsing messages.

#ifndef RPCFIT_ERROR_H
#define RPCFIT_ERROR_H

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rpcfit {

  class Error : public std::runtime_error {
  public:
    Error(std::string name, std::string const& message)
      : std::runtime_error(name + ": " + message), m_name(std::move(name)) {}

    std::string const& name() const { return m_name; }

  private:
    std::string m_name;
  };

#define RPCFIT_DEFINE_ERROR(Type)                                              \
  class Type : public Error {                                                  \
  public:                                                                      \
    explicit Type(std::string const& message) : Error(#Type, message) {}       \
  }

  // rpc_model
  RPCFIT_DEFINE_ERROR(NonPositiveScale);
  RPCFIT_DEFINE_ERROR(ParseError);
  RPCFIT_DEFINE_ERROR(MissingKey);
  RPCFIT_DEFINE_ERROR(IoError);

  // grid
  RPCFIT_DEFINE_ERROR(InvalidSpec);

  // fit
  RPCFIT_DEFINE_ERROR(TooFewPoints);
  RPCFIT_DEFINE_ERROR(DegenerateGeometry);
  RPCFIT_DEFINE_ERROR(DegenerateSpectrum);
  RPCFIT_DEFINE_ERROR(NumericalFailure);

  // sensors
  RPCFIT_DEFINE_ERROR(OutOfBounds);
  RPCFIT_DEFINE_ERROR(BehindCamera);
  RPCFIT_DEFINE_ERROR(NoAcquisition);
  RPCFIT_DEFINE_ERROR(DegenerateFit);

#undef RPCFIT_DEFINE_ERROR

  /// A denominator of the rational model fell below the magnitude floor.
  /// For projections `axis` is "row" or "col"; for weight updates `index`
  /// is the offending correspondence.
  class DenominatorNearZero : public Error {
  public:
    DenominatorNearZero(std::string axis, double value, std::size_t index = npos)
      : Error("DenominatorNearZero",
              axis + " denominator " + std::to_string(value) + " below floor" +
              (index == npos ? std::string() : " at point " + std::to_string(index))),
        m_axis(std::move(axis)), m_value(value), m_index(index) {}

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::string const& axis() const { return m_axis; }
    double value() const { return m_value; }
    std::size_t index() const { return m_index; }

  private:
    std::string m_axis;
    double m_value;
    std::size_t m_index;
  };

  class NoConvergence : public Error {
  public:
    NoConvergence(int iterations, double residual)
      : Error("NoConvergence", "no convergence after " + std::to_string(iterations) +
              " iterations, residual " + std::to_string(residual)),
        m_iterations(iterations), m_residual(residual) {}

    int iterations() const { return m_iterations; }
    double residual() const { return m_residual; }

  private:
    int m_iterations;
    double m_residual;
  };

  /// Wraps a failure raised by an input geolocation model while building
  /// correspondences or evaluating check points.
  class SensorProjectionError : public Error {
  public:
    SensorProjectionError(std::size_t index, std::string const& cause)
      : Error("SensorProjectionError",
              "point " + std::to_string(index) + ": " + cause),
        m_index(index) {}

    std::size_t index() const { return m_index; }

  private:
    std::size_t m_index;
  };

} // namespace rpcfit

#endif // RPCFIT_ERROR_H
