#pragma once

#include <map>
#include <string>
#include <vector>

#include "normsol/nonlinearity.hpp"

namespace normsol {

/// Plain-text key-value document: `key = value` lines, `#` comments,
/// repeatable keys. Tuple values are parenthesized, comma-separated.
class KeyValueDoc {
 public:
  static KeyValueDoc parse_file(const std::string& path);
  static KeyValueDoc parse_string(const std::string& text);

  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback = "") const;
  std::vector<std::string> get_all(const std::string& key) const;
  /// Parses "(a, b, c)" into numbers.
  static std::vector<double> parse_tuple(const std::string& value);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Loads a model specification:
///   family = multipower | logpower | tabulated
///   N = 3
///   sub = (coef, exp_num, exp_den)     # repeatable
///   sup = (coef, exp_num, exp_den)     # repeatable
///   point = (t, F)                     # tabulated, repeatable
///   odd = true|false                   # tabulated
NonlinearityModel load_model(const std::string& path);
NonlinearityModel parse_model(const KeyValueDoc& doc);

}  // namespace normsol
