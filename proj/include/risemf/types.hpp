// SPDX-License-Identifier: Apache-2.0
//
// ris-emf: EMF-aware MU-MIMO beamforming simulator for RIS-aided cells
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace risemf {

using cdouble = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using CRowVector = Eigen::RowVectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kSpeedOfLight = 299'792'458.0;
inline constexpr double kPi = 3.14159265358979323846;

/// Invalid configuration or arguments that violate a documented precondition.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not produce a trustworthy result.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Power-allocation scheme that produced a beamformer.
enum class Scheme { reference, reduced, enhanced };

std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string &name);

} // namespace risemf
