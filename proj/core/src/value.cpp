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

#include "iconf/value.hpp"

#include <charconv>

namespace iconf {

std::optional<std::int64_t> as_int(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  return std::nullopt;
}

std::string to_string(const Value& v) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "null"; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, v);
}

Value key_value(std::string_view key) {
  std::int64_t n = 0;
  auto [end, ec] = std::from_chars(key.data(), key.data() + key.size(), n);
  if (ec == std::errc{} && end == key.data() + key.size() && std::to_string(n) == key) return Value{n};
  return Value{std::string(key)};
}

bool truthy(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i != 0;
  if (const auto* s = std::get_if<std::string>(&v)) return !s->empty();
  return false;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingItem: return "missing-item";
    case ErrorCode::SchemaMismatch: return "schema-mismatch";
    case ErrorCode::ConfigInvalid: return "config-invalid";
    case ErrorCode::GenerationExhausted: return "generation-exhausted";
    case ErrorCode::ReplayInvalid: return "replay-invalid";
    case ErrorCode::EmptySamples: return "empty-samples";
    case ErrorCode::ItemNotFound: return "item-not-found";
    case ErrorCode::SyntaxError: return "syntax-error";
    case ErrorCode::UnresolvedReference: return "unresolved-reference";
    case ErrorCode::InvalidInitialState: return "invalid-initial-state";
    case ErrorCode::Io: return "io-error";
  }
  return "unknown";
}

std::uint64_t fnv1a(std::string_view s, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace iconf
