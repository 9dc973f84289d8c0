#include "diomax/config.hpp"

#include <fstream>
#include <sstream>

namespace diomax {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

int64_t parse_i64(const std::string& key, const std::string& text) {
  try {
    size_t used = 0;
    int64_t v = std::stoll(text, &used, 0);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw input_error("config: bad integer '" + text + "' for key " + key);
  }
}

double parse_f64(const std::string& key, const std::string& text) {
  try {
    size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw input_error("config: bad number '" + text + "' for key " + key);
  }
}

}  // namespace

Config Config::parse_text(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw input_error("config: line " + std::to_string(lineno) +
                        " has no '='");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw input_error("config: line " + std::to_string(lineno) +
                        " has an empty key");
    cfg.kv_[key] = value;
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

std::string Config::get(const std::string& key, const std::string& dflt) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? dflt : it->second;
}

std::string Config::require(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw input_error("config: missing required key " + key);
  return it->second;
}

int64_t Config::get_i64(const std::string& key, int64_t dflt) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? dflt : parse_i64(key, it->second);
}

double Config::get_f64(const std::string& key, double dflt) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? dflt : parse_f64(key, it->second);
}

std::vector<int64_t> Config::get_i64_list(const std::string& key,
                                          std::vector<int64_t> dflt) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return dflt;
  std::vector<int64_t> out;
  for (const auto& part : split(it->second, ','))
    if (!part.empty()) out.push_back(parse_i64(key, part));
  if (out.empty()) throw input_error("config: empty list for key " + key);
  return out;
}

std::vector<double> Config::get_f64_list(const std::string& key,
                                         std::vector<double> dflt) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return dflt;
  std::vector<double> out;
  for (const auto& part : split(it->second, ','))
    if (!part.empty()) out.push_back(parse_f64(key, part));
  if (out.empty()) throw input_error("config: empty list for key " + key);
  return out;
}

IntegralForm form_from_config(const Config& cfg) {
  std::string kind = cfg.get("form", "sphere");
  if (kind == "sphere") {
    int64_t n = cfg.get_i64("n", 5);
    if (n < 1 || n > 64) throw input_error("config: bad dimension n");
    return IntegralForm::diagonal(2, std::vector<int64_t>(size_t(n), 1));
  }
  if (kind == "diagonal") {
    int64_t k = cfg.get_i64("k", 2);
    std::vector<int64_t> coeffs = cfg.get_i64_list("coeffs", {});
    if (coeffs.empty()) {
      int64_t n = cfg.get_i64("n", 5);
      if (n < 1 || n > 64) throw input_error("config: bad dimension n");
      coeffs.assign(size_t(n), 1);
    }
    return IntegralForm::diagonal(int(k), coeffs);
  }
  if (kind == "quadratic") {
    std::string gram = cfg.require("gram");
    std::vector<int64_t> flat;
    size_t n = 0;
    std::string row;
    std::istringstream rows(gram);
    while (std::getline(rows, row, ';')) {
      size_t width = 0;
      std::istringstream cells(row);
      std::string cell;
      while (std::getline(cells, cell, ',')) {
        cell = trim(cell);
        if (cell.empty()) continue;
        flat.push_back(parse_i64("gram", cell));
        ++width;
      }
      if (n == 0) n = width;
      if (width != n) throw input_error("config: ragged gram matrix");
    }
    if (n == 0 || flat.size() != n * n)
      throw input_error("config: gram matrix must be square");
    return IntegralForm::quadratic(flat, int(n));
  }
  throw input_error("config: unknown form kind '" + kind + "'");
}

CutoffPsi psi_from_config(const Config& cfg) {
  std::string kind = cfg.get("psi", "unit");
  if (kind == "unit") return CutoffPsi::unit();
  if (kind == "positive_orthant") return CutoffPsi::positive_orthant();
  throw input_error("config: unknown psi kind '" + kind + "'");
}

}  // namespace diomax
