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

#pragma once

// Channel file format (UTF-8 JSON):
//
//   {"senders": [{"name": "A", "alphabet": 2}, ...],
//    "output_dim": 2,
//    "states": {"0,1": [[[re, im], ...], ...], ...}}
//
// or, for classical channels, a row-stochastic matrix whose rows are the
// joint tuples in lexicographic order (sender 1 most significant):
//
//   {"senders": [...], "classical": [[p(y|x), ...], ...]}
//
// Unknown keys are rejected.

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qmac/channel.hpp"

namespace qmac {

// Malformed document: bad JSON, wrong types, unknown keys. Distinct from
// ChannelValidationError, which means the document parsed but describes an
// invalid channel.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& message) : std::runtime_error(message) {}
};

RawChannel raw_channel_from_json(const nlohmann::json& doc);
CqMacChannel channel_from_json(const nlohmann::json& doc);
nlohmann::json channel_to_json(const CqMacChannel& ch);

// Reads and validates; ParseError for I/O or syntax problems.
CqMacChannel load_channel(const std::filesystem::path& path);
RawChannel load_raw_channel(const std::filesystem::path& path);

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

}  // namespace qmac
