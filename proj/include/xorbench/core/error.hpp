#pragma once

#include <stdexcept>
#include <string>

namespace xorbench {

// Raised when an input file, log line, or record set is malformed or
// inconsistent. Maps to CLI exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a randomized construction exhausts its attempt cap.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace xorbench
