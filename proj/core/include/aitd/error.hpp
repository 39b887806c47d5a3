/*
 * Copyright 2026 The aitd Authors.
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

#ifndef AITD_ERROR_HPP_
#define AITD_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace aitd {

// Base class for every recoverable failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable or malformed input data (files, schemas, flags).
class InputError : public Error {
 public:
  using Error::Error;
};

// Training data that cannot support a binary classifier (single class, empty).
class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

// Model or manifest file that fails integrity or version checks.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace aitd

#endif  // AITD_ERROR_HPP_
