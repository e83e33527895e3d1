// Copyright 2026 The paulest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace paulest {

/// Base class for every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI error records.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept { return "error"; }
};

#define PAULEST_DEFINE_ERROR(Name, tag)                          \
  class Name : public Error {                                    \
   public:                                                       \
    explicit Name(const std::string& what) : Error(what) {}      \
    const char* kind() const noexcept override { return tag; }   \
  }

PAULEST_DEFINE_ERROR(DimensionError, "dimension_mismatch");
PAULEST_DEFINE_ERROR(InvalidStateError, "invalid_state");
PAULEST_DEFINE_ERROR(InvalidArgumentError, "invalid_argument");
PAULEST_DEFINE_ERROR(ResourceError, "resource");
PAULEST_DEFINE_ERROR(SingularInformationError, "singular_information");
PAULEST_DEFINE_ERROR(UnidentifiableError, "unidentifiable");
PAULEST_DEFINE_ERROR(SingularMatrixError, "singular_matrix");
PAULEST_DEFINE_ERROR(StructureError, "structure");
PAULEST_DEFINE_ERROR(InvalidModelError, "invalid_model");
PAULEST_DEFINE_ERROR(SpecError, "invalid_spec");
PAULEST_DEFINE_ERROR(TrialFailureError, "trial_failures");

#undef PAULEST_DEFINE_ERROR

}  // namespace paulest
