#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "privmine/errors.hpp"
#include "privmine/randomizer.hpp"
#include "privmine/rational.hpp"

namespace privmine {

/// The reconstruction secret written by `randomize` and read by
/// `reconstruct`/`compare`. Whoever holds this file can undo the distortion;
/// it must never travel with the mixed database.
struct KeyFile {
  std::uint64_t key_i = 0;
  std::uint64_t seed = 0;
  Rational w;
  std::uint32_t l = 0;
  std::uint32_t n = 0;  // catalog size |I|
  LengthModel length_model;

  RandomizationParams params() const { return {w, l, key_i, seed, length_model}; }
};

/// Accepts "uniform" or "normal(mean, variance)".
inline LengthModel parse_length_model(std::string_view text) {
  std::string model(trim(text));
  if (model == "uniform") return LengthModel::uniform();
  if (model.rfind("normal(", 0) == 0 && !model.empty() && model.back() == ')') {
    std::string args = model.substr(7, model.size() - 8);
    auto comma = args.find(',');
    if (comma == std::string::npos)
      throw ValidationError("length model normal(...) needs mean and variance");
    double mean = 0, variance = 0;
    try {
      mean = std::stod(std::string(trim(args.substr(0, comma))));
      variance = std::stod(std::string(trim(args.substr(comma + 1))));
    } catch (const std::exception&) {
      throw ValidationError("length model normal(...) needs numeric mean and variance");
    }
    return LengthModel::normal(mean, variance);
  }
  throw ValidationError("length model must be 'uniform' or 'normal(mean, variance)'");
}

inline void write_key_file(std::ostream& out, const KeyFile& key) {
  out << "# randomization secret - do not distribute with the mixed database\n";
  out << "key_i = " << key.key_i << '\n';
  out << "seed = " << key.seed << '\n';
  out << "w = " << format_exact(key.w) << '\n';
  out << "l = " << key.l << '\n';
  out << "n = " << key.n << '\n';
  if (key.length_model.kind == LengthModel::Kind::uniform) {
    out << "length_model = uniform\n";
  } else {
    std::ostringstream tmp;
    tmp.precision(17);
    tmp << "normal(" << key.length_model.mean << ", " << key.length_model.variance << ")";
    out << "length_model = " << tmp.str() << '\n';
  }
}

inline KeyFile read_key_file(std::istream& in) {
  std::map<std::string, std::string> fields;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = detail::strip_cr(std::move(raw));
    if (detail::is_comment_or_blank(line)) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("key file line " + std::to_string(line_no) +
                            " is not a 'field = value' pair");
    std::string field(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (!fields.emplace(field, value).second)
      throw ValidationError("duplicate key file field '" + field + "'");
  }

  auto require = [&](const std::string& field) -> const std::string& {
    auto it = fields.find(field);
    if (it == fields.end()) throw ValidationError("key file is missing field '" + field + "'");
    return it->second;
  };
  auto parse_u64 = [](const std::string& value, const std::string& field) {
    BigInt v = detail::parse_integer(trim(value), field);
    if (v < 0 || v > BigInt(UINT64_MAX))
      throw ValidationError("key file field '" + field + "' out of range");
    return v.convert_to<std::uint64_t>();
  };

  KeyFile key;
  key.key_i = parse_u64(require("key_i"), "key_i");
  key.seed = parse_u64(require("seed"), "seed");
  key.w = parse_rational(require("w"));
  if (key.w <= 0) throw ValidationError("key file w must be positive");
  key.l = static_cast<std::uint32_t>(parse_u64(require("l"), "l"));
  if (key.l < 1) throw ValidationError("key file l must be at least 1");
  key.n = static_cast<std::uint32_t>(parse_u64(require("n"), "n"));
  if (key.n < 1) throw ValidationError("key file n must be at least 1");

  key.length_model = parse_length_model(require("length_model"));

  for (const auto& [field, value] : fields) {
    if (field != "key_i" && field != "seed" && field != "w" && field != "l" && field != "n" &&
        field != "length_model")
      throw ValidationError("unknown key file field '" + field + "'");
  }
  return key;
}

}  // namespace privmine
