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

#include <rpcfit/text.h>
#include <rpcfit/error.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

namespace rpcfit {

  std::string format_double(double v) {
    if (std::isnan(v))
      return "nan";
    char buf[64];
    auto const res = std::to_chars(buf, buf + sizeof(buf), v,
                                   std::chars_format::general, 17);
    return std::string(buf, res.ptr);
  }

  std::string_view trim(std::string_view s) {
    auto const first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
      return {};
    auto const last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
  }

  std::optional<double> parse_double(std::string_view token) {
    token = trim(token);
    if (!token.empty() && token.front() == '+')
      token.remove_prefix(1);
    if (token.empty())
      return std::nullopt;

    std::string buf(token);
    for (char& ch : buf)
      if (ch == 'D' || ch == 'd')
        ch = 'e';

    double value = 0.0;
    char const* begin = buf.data();
    char const* end = begin + buf.size();
    auto const [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
      return std::nullopt;
    return value;
  }

  void write_file_atomic(std::filesystem::path const& path, std::string const& content) {
    std::filesystem::path tmp = path;
    tmp += ".partial";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out)
        throw IoError("cannot open " + tmp.string() + " for writing");
      out << content;
      out.flush();
      if (!out) {
        std::error_code ec;
        std::filesystem::remove(tmp, ec);
        throw IoError("failed writing " + tmp.string());
      }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
      std::filesystem::remove(tmp, ec);
      throw IoError("cannot move output into " + path.string());
    }
  }

} // namespace rpcfit
