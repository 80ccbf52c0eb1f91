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

// Keyword text format for RPC models:
//
//   LINE_OFF: 5000 pixels
//   ...
//   LINE_NUM_COEFF_1: 0.0123
//
// Lines are "KEY: value [units]". Blank lines and lines starting with '#'
// are skipped. Unknown keys are ignored.

#include <rpcfit/rpc_model.h>
#include <rpcfit/error.h>
#include <rpcfit/text.h>

#include <fstream>
#include <map>
#include <sstream>

namespace rpcfit {

  namespace {

    struct ScalarKey {
      char const* key;
      char const* units;
      Scaling NormalizationParams::*var;
      double Scaling::*field;
    };

    constexpr ScalarKey kScalarKeys[] = {
      {"LINE_OFF",     "pixels",  &NormalizationParams::row, &Scaling::offset},
      {"SAMP_OFF",     "pixels",  &NormalizationParams::col, &Scaling::offset},
      {"LAT_OFF",      "degrees", &NormalizationParams::lat, &Scaling::offset},
      {"LONG_OFF",     "degrees", &NormalizationParams::lon, &Scaling::offset},
      {"HEIGHT_OFF",   "meters",  &NormalizationParams::alt, &Scaling::offset},
      {"LINE_SCALE",   "pixels",  &NormalizationParams::row, &Scaling::scale},
      {"SAMP_SCALE",   "pixels",  &NormalizationParams::col, &Scaling::scale},
      {"LAT_SCALE",    "degrees", &NormalizationParams::lat, &Scaling::scale},
      {"LONG_SCALE",   "degrees", &NormalizationParams::lon, &Scaling::scale},
      {"HEIGHT_SCALE", "meters",  &NormalizationParams::alt, &Scaling::scale},
    };

    constexpr char const* kPolyPrefixes[] = {
      "LINE_NUM_COEFF_", "LINE_DEN_COEFF_", "SAMP_NUM_COEFF_", "SAMP_DEN_COEFF_"};

    struct Entry {
      double value;
      int line;
    };

  } // namespace

  RpcModel read_rpc(std::istream& in) {
    std::map<std::string, Entry, std::less<>> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::string_view const text = trim(line);
      if (text.empty() || text.front() == '#')
        continue;
      auto const colon = text.find(':');
      if (colon == std::string_view::npos)
        throw ParseError("line " + std::to_string(line_no) + ": expected 'KEY: value'");
      std::string key(trim(text.substr(0, colon)));
      std::string_view rest = trim(text.substr(colon + 1));

      // Value is the first token; anything after it is a units suffix.
      std::string_view token = rest.substr(0, rest.find_first_of(" \t"));
      auto const value = parse_double(token);
      if (!value)
        throw ParseError("line " + std::to_string(line_no) + ": bad number '" +
                         std::string(token) + "' for " + key);
      entries[key] = {*value, line_no};
    }

    auto get = [&](std::string const& key) {
      auto const it = entries.find(key);
      if (it == entries.end())
        throw MissingKey(key);
      return it->second.value;
    };

    NormalizationParams norm;
    for (ScalarKey const& k : kScalarKeys)
      (norm.*(k.var)).*(k.field) = get(k.key);

    PolyCoeffs polys[4];
    for (int p = 0; p < 4; ++p)
      for (int i = 0; i < kNumMonomials; ++i)
        polys[p][i] = get(std::string(kPolyPrefixes[p]) + std::to_string(i + 1));

    for (int p : {1, 3})
      if (polys[p][0] != 1.0)
        throw ParseError("line " +
                         std::to_string(entries[std::string(kPolyPrefixes[p]) + "1"].line) +
                         ": denominator constant term must be 1");

    norm.validate();
    return RpcModel(polys[0], polys[1], polys[2], polys[3], norm);
  }

  void write_rpc(RpcModel const& m, std::ostream& out) {
    NormalizationParams const& norm = m.norm();
    for (ScalarKey const& k : kScalarKeys)
      out << k.key << ": " << format_double((norm.*(k.var)).*(k.field))
          << ' ' << k.units << '\n';

    PolyCoeffs const* polys[4] = {&m.num_row(), &m.den_row(), &m.num_col(), &m.den_col()};
    for (int p = 0; p < 4; ++p)
      for (int i = 0; i < kNumMonomials; ++i)
        out << kPolyPrefixes[p] << (i + 1) << ": " << format_double((*polys[p])[i]) << '\n';
  }

  RpcModel read_rpc_file(std::filesystem::path const& path) {
    std::ifstream in(path);
    if (!in)
      throw IoError("cannot open " + path.string());
    return read_rpc(in);
  }

  void write_rpc_file(RpcModel const& m, std::filesystem::path const& path) {
    std::ostringstream ss;
    write_rpc(m, ss);
    write_file_atomic(path, ss.str());
  }

} // namespace rpcfit
