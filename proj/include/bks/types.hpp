// Copyright 2026 The bkspair Authors.
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

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bks {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Raised when an argument lies outside an operation's domain
/// (non-dominant weight, non-positive polarization parameter, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a truncated series cannot meet the requested tolerance.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double tail_bound, double tolerance)
      : std::runtime_error(what), tail_bound_(tail_bound), tolerance_(tolerance) {}
  double tail_bound() const { return tail_bound_; }
  double tolerance() const { return tolerance_; }

 private:
  double tail_bound_;
  double tolerance_;
};

/// Raised when an integrand produces a non-finite value at a node.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bks
