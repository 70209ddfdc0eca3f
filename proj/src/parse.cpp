#include "orlicz/parse.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace orlicz {

double parse_number(const std::string& token) {
  if (token.empty()) throw ParseError(token, "empty number");
  std::string t = token;
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  double value = 0.0;
  const char* first = t.data();
  if (*first == '+') ++first;
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || std::isnan(value)) throw ParseError(token, "not a number");
  return value;
}

DescriptorText split_descriptor(const std::string& text) {
  DescriptorText d;
  d.raw = text;
  const auto colon = text.find(':');
  d.family = text.substr(0, colon);
  if (d.family.empty()) throw ParseError(text, "missing family name");
  if (colon == std::string::npos) return d;
  const std::string rest = text.substr(colon + 1);
  if (d.family == "table") {
    if (rest.empty()) throw ParseError(text, "table needs a file path");
    d.path = rest;
    return d;
  }
  if (rest.empty()) return d;
  std::stringstream ss(rest);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError(item, "expected key=value");
    const std::string key = item.substr(0, eq);
    if (d.params.count(key)) throw ParseError(key, "duplicate key");
    d.params[key] = parse_number(item.substr(eq + 1));
  }
  return d;
}

void require_keys(const DescriptorText& d, const std::vector<std::string>& allowed) {
  for (const auto& [key, value] : d.params) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ParseError(key, "unknown parameter for family " + d.family);
    }
  }
}

double param_or(const DescriptorText& d, const std::string& key, double fallback) {
  const auto it = d.params.find(key);
  return it == d.params.end() ? fallback : it->second;
}

double param(const DescriptorText& d, const std::string& key) {
  const auto it = d.params.find(key);
  if (it == d.params.end()) throw ParseError(d.raw, "missing parameter " + key);
  return it->second;
}

std::vector<std::pair<double, double>> read_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  std::vector<std::pair<double, double>> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::stringstream ss(line);
    std::string a;
    std::string b;
    if (!(ss >> a)) continue;
    if (!(ss >> b)) throw ParseError(line, "expected two numbers");
    out.emplace_back(parse_number(a), parse_number(b));
  }
  return out;
}

}  // namespace orlicz
