// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace risbeam {

// Invalid scenario/configuration input (bad field values, unknown modes,
// malformed files). CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Geometry that cannot be evaluated, e.g. an observation point coincident
// with an array unit.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite values or a failed numeric precondition. CLI exit code 4.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No phase configuration meets all suppression thresholds within tolerance
// (bracket initialization failed). CLI exit code 3.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace risbeam
