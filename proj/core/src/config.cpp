#include "spou/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "spou/errors.hpp"
#include "spou/report.hpp"

namespace spou {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// recursive-descent parser for possibly-nested bracket arrays of numbers
struct ArrayParser {
  const std::string& s;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  double number() {
    skip_ws();
    size_t used = 0;
    double v;
    try {
      v = std::stod(s.substr(pos), &used);
    } catch (const std::exception&) {
      throw input_error("expected a number in array value: " + s);
    }
    pos += used;
    return v;
  }
  std::vector<double> flat_array() {
    skip_ws();
    if (pos >= s.size() || s[pos] != '[') throw input_error("expected '[' in array value: " + s);
    ++pos;
    std::vector<double> out;
    skip_ws();
    while (pos < s.size() && s[pos] != ']') {
      out.push_back(number());
      skip_ws();
      if (pos < s.size() && s[pos] == ',') {
        ++pos;
        skip_ws();
      }
    }
    if (pos >= s.size()) throw input_error("unterminated array value: " + s);
    ++pos;
    return out;
  }
  std::vector<std::vector<double>> nested_array() {
    skip_ws();
    if (pos >= s.size() || s[pos] != '[') throw input_error("expected '[' in array value: " + s);
    ++pos;
    std::vector<std::vector<double>> out;
    skip_ws();
    while (pos < s.size() && s[pos] != ']') {
      if (s[pos] == '[')
        out.push_back(flat_array());
      else
        out.push_back({number()});
      skip_ws();
      if (pos < s.size() && s[pos] == ',') {
        ++pos;
        skip_ws();
      }
    }
    if (pos >= s.size()) throw input_error("unterminated array value: " + s);
    ++pos;
    return out;
  }
};

}  // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw input_error("config line missing '=': " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw input_error("config line with empty key: " + line);
    cfg.set(key, value);
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool KeyValueConfig::has(const std::string& key) const { return kv_.count(key) > 0; }

const std::string& KeyValueConfig::raw(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw input_error("missing config key: " + key);
  return it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
  const std::string& v = raw(key);
  size_t used = 0;
  double out;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    throw input_error("config key '" + key + "' is not a number: " + v);
  }
  if (trim(v.substr(used)).size()) throw input_error("config key '" + key + "' has trailing text");
  return out;
}

int KeyValueConfig::get_int(const std::string& key) const {
  const double v = get_double(key);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) throw input_error("config key '" + key + "' is not an integer");
  return i;
}

std::string KeyValueConfig::get_string(const std::string& key) const { return raw(key); }

std::vector<double> KeyValueConfig::get_vector(const std::string& key) const {
  ArrayParser p{raw(key)};
  return p.flat_array();
}

std::vector<std::vector<double>> KeyValueConfig::get_matrix(const std::string& key) const {
  ArrayParser p{raw(key)};
  return p.nested_array();
}

std::optional<double> KeyValueConfig::maybe_double(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return get_double(key);
}

std::optional<std::string> KeyValueConfig::maybe_string(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return get_string(key);
}

void KeyValueConfig::set(const std::string& key, const std::string& raw_value) {
  if (!kv_.count(key)) order_.push_back(key);
  kv_[key] = raw_value;
}

void KeyValueConfig::set_double(const std::string& key, double v) { set(key, fmt_double(v)); }

void KeyValueConfig::set_int(const std::string& key, int v) { set(key, std::to_string(v)); }

void KeyValueConfig::set_matrix(const std::string& key, const SquareMatrix& m) {
  std::string s = "[";
  for (int i = 0; i < m.dim(); ++i) {
    s += i ? ", [" : "[";
    for (int j = 0; j < m.dim(); ++j) {
      if (j) s += ", ";
      s += fmt_double(m.at(i, j));
    }
    s += "]";
  }
  s += "]";
  set(key, s);
}

std::string KeyValueConfig::dump() const {
  std::string out;
  for (const auto& k : order_) {
    out += k;
    out += " = ";
    out += kv_.at(k);
    out += '\n';
  }
  return out;
}

void KeyValueConfig::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write config file: " + path);
  out << dump();
  if (!out) throw io_error("write failed: " + path);
}

SquareMatrix matrix_from_config(const KeyValueConfig& cfg) {
  const auto rows = cfg.get_matrix("entries");
  SquareMatrix m = SquareMatrix::from_rows(rows);
  if (cfg.has("dim") && cfg.get_int("dim") != m.dim())
    throw input_error("matrix config: 'dim' disagrees with the entry rows");
  if (!m.all_finite()) throw input_error("matrix config: entries must be finite");
  return m;
}

SquareMatrix load_matrix(const std::string& path) {
  return matrix_from_config(KeyValueConfig::load(path));
}

RadialProfile load_profile(const std::string& path_or_spec) {
  std::ifstream probe(path_or_spec);
  if (!probe) return profiles::from_spec(path_or_spec);  // inline builtin spec
  std::ostringstream ss;
  ss << probe.rdbuf();
  const auto cfg = KeyValueConfig::parse(ss.str());
  const std::string name = cfg.get_string("profile");
  if (name == "gaussian") return profiles::gaussian();
  if (name == "exp-abs") return profiles::exp_abs();
  if (name == "plateau-linear")
    return profiles::plateau_linear(cfg.get_double("R1"), cfg.get_double("R"));
  if (name == "step") return profiles::step(cfg.get_double("R"));
  throw input_error("unknown profile in config: " + name);
}

Norm parse_norm(const std::string& name) {
  if (name == "euclid" || name == "euclidean") return Norm::euclidean;
  if (name == "max") return Norm::max;
  throw input_error("unknown norm (use euclid or max): " + name);
}

std::string norm_name(Norm n) { return n == Norm::euclidean ? "euclid" : "max"; }

void save_pair(const FrameGeneratorPair& pair, const std::string& path) {
  KeyValueConfig cfg;
  cfg.set("kind", pair.kind);
  if (pair.kind == "spline-dual") {
    cfg.set_int("n", pair.spline_order);
    cfg.set_double("c", pair.spline_ratio);
  } else if (pair.kind == "radial-dual") {
    cfg.set("profile", pair.profile->name);
    for (size_t i = 0; i < pair.profile->params.size(); ++i)
      cfg.set_double("profile_param_" + std::to_string(i), pair.profile->params[i]);
    cfg.set_matrix("matrix", *pair.space_matrix);
    cfg.set("norm", norm_name(pair.norm));
  } else {
    throw input_error("cannot serialize pair of kind: " + pair.kind);
  }
  cfg.set_double("b", pair.b);
  cfg.set_double("r_eff", pair.r_eff);
  cfg.set("psi_support", "[" + fmt_double(pair.psi_support.r_lo) + ", " +
                             fmt_double(pair.psi_support.r_hi) + "]");
  cfg.set("psi_dual_support", "[" + fmt_double(pair.psi_dual_support.r_lo) + ", " +
                                  fmt_double(pair.psi_dual_support.r_hi) + "]");
  cfg.set("m_nonzero_route",
          pair.support_disjointness_route ? "support-disjointness" : "not-established");
  cfg.set_double("plateau_value", pair.plateau_value);
  if (pair.index_set) {
    cfg.set_int("j_min", pair.index_set->j_min);
    cfg.set_int("j_max", pair.index_set->j_max);
  }
  cfg.save(path);
}

FrameGeneratorPair load_pair(const std::string& path) {
  const auto cfg = KeyValueConfig::load(path);
  const std::string kind = cfg.get_string("kind");
  if (kind == "spline-dual") {
    return build_spline_dual_pair(cfg.get_int("n"), cfg.get_double("c"), cfg.get_double("b"));
  }
  if (kind == "radial-dual") {
    const std::string name = cfg.get_string("profile");
    RadialProfile prof;
    if (name == "plateau-linear")
      prof = profiles::plateau_linear(cfg.get_double("profile_param_0"),
                                      cfg.get_double("profile_param_1"));
    else if (name == "step")
      prof = profiles::step(cfg.get_double("profile_param_0"));
    else
      throw input_error("radial pair file with non-compact profile: " + name);
    const SquareMatrix m = SquareMatrix::from_rows(cfg.get_matrix("matrix"));
    const Norm norm = parse_norm(cfg.get_string("norm"));
    return build_radial_dual_pair(prof, m, cfg.get_double("b"), norm);
  }
  throw input_error("unknown pair kind in file: " + kind);
}

}  // namespace spou
