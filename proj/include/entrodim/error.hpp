#pragma once

#include <stdexcept>
#include <string>

namespace entrodim {

// Bad input: schema violations, out-of-range parameters, empty sets.
// The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A computation ran but could not certify its answer (inconclusive interval
// arithmetic, failed LP verification, no admissible parameter). Exit code 3.
class CertificationError : public std::runtime_error {
 public:
  explicit CertificationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace entrodim
