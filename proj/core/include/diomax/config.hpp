#pragma once
// Plain key=value experiment configuration.
//
// Grammar: one "key = value" per line; '#' starts a comment; blank lines are
// skipped; later assignments win.  Values are strings until a typed getter
// parses them; lists are comma-separated; a quadratic Gram matrix separates
// rows with ';'.  The parser keeps unknown keys so every experiment can read
// just what it needs and echo the rest untouched into its report.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "diomax/common.hpp"
#include "diomax/forms.hpp"

namespace diomax {

class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_text(const std::string& text);

  bool has(const std::string& key) const { return kv_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) {
    kv_[key] = value;
  }

  std::string get(const std::string& key, const std::string& dflt) const;
  std::string require(const std::string& key) const;
  int64_t get_i64(const std::string& key, int64_t dflt) const;
  double get_f64(const std::string& key, double dflt) const;
  std::vector<int64_t> get_i64_list(const std::string& key,
                                    std::vector<int64_t> dflt) const;
  std::vector<double> get_f64_list(const std::string& key,
                                   std::vector<double> dflt) const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

/// Build the form a config describes; the default is the five-variable sum
/// of squares.  Keys: form in {sphere, diagonal, quadratic}; n; k; coeffs;
/// gram (rows split by ';').
IntegralForm form_from_config(const Config& cfg);

/// Cutoff from the "psi" key: unit (default) or positive_orthant.
CutoffPsi psi_from_config(const Config& cfg);

}  // namespace diomax
