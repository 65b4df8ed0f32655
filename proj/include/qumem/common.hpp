// Copyright 2026 The qumem Authors
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

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qumem {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

// Errors are grouped by what the caller did wrong, so the CLI can map them to
// exit codes without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes or sizes that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A numeric argument outside the range where the model is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid experiment or device configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed or missing input data (dataset files, counts).
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace qumem
