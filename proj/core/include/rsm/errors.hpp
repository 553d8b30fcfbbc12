// Copyright 2026 The rsmkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RSM_ERRORS_HPP_
#define RSM_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace rsm {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed or incomplete input data (NaN in a series, wrong lengths, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// The model matrix does not have full column rank.
class RankDeficientError : public Error {
 public:
  RankDeficientError(const std::string& what, std::vector<std::string> terms)
      : Error(what), collinear_terms_(std::move(terms)) {}
  const std::vector<std::string>& collinear_terms() const { return collinear_terms_; }

 private:
  std::vector<std::string> collinear_terms_;
};

// Steepest ascent requested from a model with an all-zero gradient.
class NoDirectionError : public Error {
 public:
  using Error::Error;
};

// The quadratic-coefficient matrix is numerically singular.
class RidgeSuspectedError : public Error {
 public:
  RidgeSuspectedError(const std::string& what, std::vector<double> direction)
      : Error(what), null_direction_(std::move(direction)) {}
  // Unit eigenvector of the eigenvalue closest to zero (coded units).
  const std::vector<double>& null_direction() const { return null_direction_; }

 private:
  std::vector<double> null_direction_;
};

class DegenerateBootstrapError : public Error {
 public:
  using Error::Error;
};

class UndefinedCorrelationError : public Error {
 public:
  using Error::Error;
};

class EvaluationTimeout : public Error {
 public:
  using Error::Error;
};

class MalformedResponseError : public Error {
 public:
  MalformedResponseError(const std::string& what, std::vector<int> run_ids)
      : Error(what), run_ids_(std::move(run_ids)) {}
  const std::vector<int>& run_ids() const { return run_ids_; }

 private:
  std::vector<int> run_ids_;
};

// A CSV/JSON artifact does not match the expected schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace rsm

#endif  // RSM_ERRORS_HPP_
