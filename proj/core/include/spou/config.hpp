#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spou/field.hpp"
#include "spou/frame.hpp"
#include "spou/matrix.hpp"

namespace spou {

// Line-oriented `key = value` text. Values are numbers, bare strings, or
// (nested) bracket arrays. '#' starts a comment. No third-party schema: the
// format round-trips bit-exactly through fmt_double.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text);
  static KeyValueConfig load(const std::string& path);

  bool has(const std::string& key) const;
  const std::string& raw(const std::string& key) const;

  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::vector<double> get_vector(const std::string& key) const;
  std::vector<std::vector<double>> get_matrix(const std::string& key) const;

  std::optional<double> maybe_double(const std::string& key) const;
  std::optional<std::string> maybe_string(const std::string& key) const;

  void set(const std::string& key, const std::string& raw_value);
  void set_double(const std::string& key, double v);
  void set_int(const std::string& key, int v);
  void set_matrix(const std::string& key, const SquareMatrix& m);

  std::string dump() const;  // keys in insertion order
  void save(const std::string& path) const;

 private:
  std::vector<std::string> order_;
  std::map<std::string, std::string> kv_;
};

// matrix file: `entries = [[...], ...]` (+ optional `dim`)
SquareMatrix load_matrix(const std::string& path);
SquareMatrix matrix_from_config(const KeyValueConfig& cfg);

// profile: either a config file (`profile = name`, parameters by name) or an
// inline builtin spec such as "plateau-linear:1:2"
RadialProfile load_profile(const std::string& path_or_spec);

Norm parse_norm(const std::string& name);
std::string norm_name(Norm n);

// frame pair round trip: the file stores the construction parameters and the
// loader rebuilds the pair through the same constructor
void save_pair(const FrameGeneratorPair& pair, const std::string& path);
FrameGeneratorPair load_pair(const std::string& path);

}  // namespace spou
