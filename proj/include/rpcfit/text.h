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

// Number formatting shared by the text, CSV and JSON writers.

#ifndef RPCFIT_TEXT_H
#define RPCFIT_TEXT_H

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace rpcfit {

  /// 17 significant digits, so every double survives a text round trip.
  std::string format_double(double v);

  /// Accepts plain and scientific notation, a leading '+', and Fortran
  /// style 'D' exponents. Returns nullopt unless the whole token parses.
  std::optional<double> parse_double(std::string_view token);

  std::string_view trim(std::string_view s);

  /// Writes `content` to a sibling temporary file and renames it into
  /// place, so a failed run never leaves a truncated output behind.
  void write_file_atomic(std::filesystem::path const& path, std::string const& content);

} // namespace rpcfit

#endif // RPCFIT_TEXT_H
