/*
 * Copyright 2026 The cartelc Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CARTELC_ERRORS_HPP_
#define CARTELC_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace cartelc {

// Base of every error raised by the library. The CLI maps the input-side
// subclasses (everything except ContractError) to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input bytes: CSV cells, JSON documents.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Caller asked for something that cannot be configured (unknown column,
// r > m, folds < 2, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Dataset contents unsuitable for the requested transform or algorithm.
class PreprocessingError : public Error {
 public:
  using Error::Error;
};

// Zero rows left after loading or filtering.
class EmptyDatasetError : public PreprocessingError {
 public:
  using PreprocessingError::PreprocessingError;
};

// Argument outside a mathematical domain (binomials, undefined effects).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Numerical precondition broken by the caller (asymmetric matrix,
// non-unit direction).
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace cartelc

#endif  // CARTELC_ERRORS_HPP_
