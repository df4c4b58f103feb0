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

// JSON workload documents: parsing with located diagnostics, canonical
// serialization, and coverage lint.

#include <string>
#include <string_view>
#include <vector>

#include "iconf/workload.hpp"

namespace iconf {

struct Diagnostic {
  ErrorCode code = ErrorCode::SyntaxError;
  std::string location;  // JSON pointer, or line:column for syntax errors
  std::string message;
  bool operator==(const Diagnostic&) const = default;
};

// Every problem found in a document, not only the first.
class SpecError : public Error {
 public:
  explicit SpecError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

// Throws SpecError (SyntaxError, UnresolvedReference, InvalidInitialState).
Workload parse_spec(std::string_view text);
// Adds Io errors for unreadable files.
Workload load_spec(const std::string& path);

std::string serialize(const Workload& w);

// Lint: transactions without operation classes, invariants no transaction
// can affect, written tables no invariant covers, writes outside a declared
// write set.
std::vector<std::string> validate_spec(const Workload& w);

}  // namespace iconf
