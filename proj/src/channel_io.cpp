// Copyright 2026 The qmac Authors
//
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

#include "qmac/channel_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "qmac/errors.hpp"

namespace qmac {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) throw ParseError("unknown field \"" + key + "\" in " + where);
  }
}

std::size_t positive_int(const json& j, const std::string& what) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) {
    throw ParseError(what + " must be an integer");
  }
  const auto v = j.get<long long>();
  if (v < 0) throw ParseError(what + " must be nonnegative");
  return static_cast<std::size_t>(v);
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ParseError(what + " must be a number");
  return j.get<double>();
}

Letters parse_tuple_key(const std::string& key) {
  Letters out;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(part, &pos);
    } catch (const std::exception&) {
      throw ParseError("bad state key \"" + key + "\"");
    }
    if (pos != part.size()) throw ParseError("bad state key \"" + key + "\"");
    out.push_back(v);
  }
  if (out.empty()) throw ParseError("empty state key");
  return out;
}

}  // namespace

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = -1;
  Matrix m;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array()) throw ParseError("matrix row must be an array");
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      m.resize(rows, cols);
    } else if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw ParseError("matrix rows have different lengths");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& z = row[static_cast<std::size_t>(c)];
      if (z.is_number()) {
        m(r, c) = Complex(z.get<double>(), 0.0);
      } else if (z.is_array() && z.size() == 2) {
        m(r, c) = Complex(number(z[0], "real part"), number(z[1], "imaginary part"));
      } else {
        throw ParseError("matrix entry must be [re, im] or a number");
      }
    }
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

RawChannel raw_channel_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("channel document must be a JSON object");
  reject_unknown_keys(doc, {"senders", "output_dim", "states", "classical"}, "channel");
  if (!doc.contains("senders") || !doc["senders"].is_array()) {
    throw ParseError("channel needs a \"senders\" array");
  }
  RawChannel raw;
  for (const auto& s : doc["senders"]) {
    if (!s.is_object()) throw ParseError("sender entry must be an object");
    reject_unknown_keys(s, {"name", "alphabet"}, "sender");
    if (!s.contains("alphabet")) throw ParseError("sender needs \"alphabet\"");
    raw.alphabets.push_back(positive_int(s["alphabet"], "alphabet"));
    if (s.contains("name")) {
      if (!s["name"].is_string()) throw ParseError("sender name must be a string");
      raw.names.push_back(s["name"].get<std::string>());
    } else {
      raw.names.push_back("X" + std::to_string(raw.alphabets.size()));
    }
  }

  const bool has_states = doc.contains("states");
  const bool has_classical = doc.contains("classical");
  if (has_states == has_classical) {
    throw ParseError("channel needs exactly one of \"states\" or \"classical\"");
  }

  if (has_states) {
    if (!doc.contains("output_dim")) throw ParseError("channel needs \"output_dim\"");
    raw.output_dim = positive_int(doc["output_dim"], "output_dim");
    if (!doc["states"].is_object()) throw ParseError("\"states\" must be an object");
    for (const auto& [key, value] : doc["states"].items()) {
      raw.states.emplace(parse_tuple_key(key), matrix_from_json(value));
    }
    return raw;
  }

  const json& rows = doc["classical"];
  if (!rows.is_array() || rows.empty()) throw ParseError("\"classical\" must be a nonempty array");
  const std::size_t out = rows[0].is_array() ? rows[0].size() : 0;
  if (doc.contains("output_dim")) {
    const std::size_t declared = positive_int(doc["output_dim"], "output_dim");
    if (declared != out) throw ParseError("output_dim does not match classical row length");
  }
  raw.output_dim = out;
  const std::size_t total = radix_product(raw.alphabets);
  if (rows.size() != total) {
    throw ParseError("classical matrix has " + std::to_string(rows.size()) +
                     " rows, expected " + std::to_string(total));
  }
  for (std::size_t idx = 0; idx < total; ++idx) {
    const json& row = rows[idx];
    if (!row.is_array() || row.size() != out) throw ParseError("classical rows must have equal length");
    const auto d = static_cast<Eigen::Index>(out);
    Matrix m = Matrix::Zero(d, d);
    for (Eigen::Index y = 0; y < d; ++y) m(y, y) = number(row[static_cast<std::size_t>(y)], "probability");
    raw.states.emplace(decode_tuple(idx, raw.alphabets), std::move(m));
  }
  return raw;
}

CqMacChannel channel_from_json(const json& doc) {
  return validate_channel(raw_channel_from_json(doc));
}

json channel_to_json(const CqMacChannel& ch) {
  json doc;
  json senders = json::array();
  for (std::size_t i = 0; i < ch.num_senders(); ++i) {
    senders.push_back({{"name", ch.names()[i]}, {"alphabet", ch.alphabets()[i]}});
  }
  doc["senders"] = std::move(senders);
  doc["output_dim"] = ch.output_dim();
  json states = json::object();
  for (std::size_t idx = 0; idx < ch.num_tuples(); ++idx) {
    const Letters letters = ch.letters_of(idx);
    std::string key;
    for (std::size_t k = 0; k < letters.size(); ++k) {
      if (k) key += ",";
      key += std::to_string(letters[k]);
    }
    states[key] = matrix_to_json(ch.state_at(idx).matrix());
  }
  doc["states"] = std::move(states);
  return doc;
}

RawChannel load_raw_channel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return raw_channel_from_json(doc);
}

CqMacChannel load_channel(const std::filesystem::path& path) {
  return validate_channel(load_raw_channel(path));
}

}  // namespace qmac
