// Copyright 2026 The psne-lab Authors
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

#ifndef PSNE_ERROR_HPP_
#define PSNE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace psne {

// Bad arguments or configuration; the CLI maps these to exit status 1.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Inputs that are well-formed but outside the model's domain, e.g. a
// trivial game whose PSNE set is empty or full.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A size limit (enumeration cap, exact-mode cap) was exceeded.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace psne

#endif  // PSNE_ERROR_HPP_
