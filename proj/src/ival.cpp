/*
 * Copyright (c) 2026, The randconc authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "randconc/ival.hpp"

#include <charconv>

namespace randconc {

std::string index_to_string(const Index& idx) {
  std::string s;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(idx[i]);
  }
  return s;
}

Index index_from_string(const std::string& text) {
  Index idx;
  if (text.empty()) return idx;
  std::size_t pos = 0;
  while (true) {
    std::size_t dot = text.find('.', pos);
    std::string_view part(text.data() + pos, (dot == std::string::npos ? text.size() : dot) - pos);
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc{} || ptr != part.data() + part.size() || part.empty())
      throw InvalidArgument("malformed index '" + text + "'");
    idx.push_back(v);
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  return idx;
}

}  // namespace randconc
