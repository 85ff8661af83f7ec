// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Minimal TOML subset: [section] / [a.b] tables, bare keys, # comments,
// values = strings, integers, floats, booleans, and (nested) arrays on a
// single line. That covers every run config this tool reads; anything else
// is a parse error, never a silent misread.

#include <json.hpp>
#include <cctype>
#include <sstream>
#include <stdexcept>
#include <string>

namespace toml_lite {

inline nlohmann::json parse_value(const std::string& s, std::size_t& i);

inline void skip_ws(const std::string& s, std::size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

inline nlohmann::json parse_array(const std::string& s, std::size_t& i) {
  nlohmann::json arr = nlohmann::json::array();
  ++i;  // '['
  for (;;) {
    skip_ws(s, i);
    if (i >= s.size()) throw std::runtime_error("unterminated array");
    if (s[i] == ']') {
      ++i;
      return arr;
    }
    arr.push_back(parse_value(s, i));
    skip_ws(s, i);
    if (i < s.size() && s[i] == ',') ++i;
  }
}

inline nlohmann::json parse_value(const std::string& s, std::size_t& i) {
  skip_ws(s, i);
  if (i >= s.size()) throw std::runtime_error("missing value");
  if (s[i] == '[') return parse_array(s, i);
  if (s[i] == '"') {
    std::string out;
    for (++i; i < s.size() && s[i] != '"'; ++i) {
      if (s[i] == '\\' && i + 1 < s.size()) ++i;
      out += s[i];
    }
    if (i >= s.size()) throw std::runtime_error("unterminated string");
    ++i;
    return out;
  }
  std::size_t start = i;
  while (i < s.size() && s[i] != ',' && s[i] != ']' && s[i] != '#') ++i;
  std::string tok = s.substr(start, i - start);
  while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t'))
    tok.pop_back();
  if (tok == "true") return true;
  if (tok == "false") return false;
  if (tok.find_first_of(".eE") != std::string::npos &&
      tok.find_first_not_of("+-0123456789.eE") == std::string::npos)
    return std::stod(tok);
  try {
    std::size_t used = 0;
    long long v = std::stoll(tok, &used);
    if (used == tok.size()) return v;
  } catch (...) {
  }
  try {
    return std::stod(tok);
  } catch (...) {
    throw std::runtime_error("bad value: " + tok);
  }
}

inline nlohmann::json parse(const std::string& text) {
  nlohmann::json root = nlohmann::json::object();
  nlohmann::json* table = &root;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t i = 0;
    skip_ws(line, i);
    if (i >= line.size() || line[i] == '#') continue;
    try {
      if (line[i] == '[') {
        std::size_t close = line.find(']', i);
        if (close == std::string::npos) throw std::runtime_error("missing ]");
        std::string path = line.substr(i + 1, close - i - 1);
        table = &root;
        std::istringstream parts(path);
        std::string part;
        while (std::getline(parts, part, '.'))
          table = &(*table)[part];
        continue;
      }
      std::size_t eq = line.find('=', i);
      if (eq == std::string::npos) throw std::runtime_error("missing =");
      std::string key = line.substr(i, eq - i);
      while (!key.empty() && (key.back() == ' ' || key.back() == '\t'))
        key.pop_back();
      std::size_t vi = eq + 1;
      (*table)[key] = parse_value(line, vi);
    } catch (const std::exception& e) {
      throw std::runtime_error("config line " + std::to_string(lineno) + ": " +
                               e.what());
    }
  }
  return root;
}

}  // namespace toml_lite
