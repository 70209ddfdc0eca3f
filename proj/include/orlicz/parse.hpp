#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace orlicz {

/// A descriptor string `family:key=value,key=value` split into parts.
/// For `table:<file>` the path lands in `path` and `params` stays empty.
struct DescriptorText {
  std::string family;
  std::map<std::string, double> params;
  std::string path;
  std::string raw;
};

/// Thrown for any malformed descriptor; what() names the offending token.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& token, const std::string& why)
      : std::invalid_argument(why + ": '" + token + "'"), token_(token) {}
  [[nodiscard]] const std::string& token() const { return token_; }

 private:
  std::string token_;
};

DescriptorText split_descriptor(const std::string& text);

/// Strict decimal parse of a whole token.
double parse_number(const std::string& token);

/// Rejects any key of `d` that is not in `allowed`.
void require_keys(const DescriptorText& d, const std::vector<std::string>& allowed);

/// Returns params[key] or `fallback`; throws if missing and no fallback given.
double param_or(const DescriptorText& d, const std::string& key, double fallback);
double param(const DescriptorText& d, const std::string& key);

/// Reads whitespace-separated number pairs, ignoring blank lines and `#` comments.
std::vector<std::pair<double, double>> read_pairs(const std::string& path);

}  // namespace orlicz
