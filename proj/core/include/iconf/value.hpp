//  Copyright 2026 The iconf Authors
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace iconf {

using ReplicaId = std::uint32_t;
using ItemId = std::string;

// Scalar field value. monostate is SQL NULL.
using Value = std::variant<std::monostate, std::int64_t, std::string>;

inline bool is_null(const Value& v) { return std::holds_alternative<std::monostate>(v); }
std::optional<std::int64_t> as_int(const Value& v);
std::string to_string(const Value& v);

// Value of a record key: canonical decimal integers read back as integers,
// anything else as a string. Keys are rendered from values with to_string.
Value key_value(std::string_view key);

// Integer values are truthy when nonzero, strings when nonempty.
bool truthy(const Value& v);

enum class ErrorCode {
  MissingItem,
  SchemaMismatch,
  ConfigInvalid,
  GenerationExhausted,
  ReplayInvalid,
  EmptySamples,
  ItemNotFound,
  SyntaxError,
  UnresolvedReference,
  InvalidInitialState,
  Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Stable 64-bit FNV-1a; used wherever placement must not depend on std::hash.
std::uint64_t fnv1a(std::string_view s, std::uint64_t seed = 0xcbf29ce484222325ULL);

// SplitMix64 step, for deriving independent seeds from (seed, index).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace iconf
