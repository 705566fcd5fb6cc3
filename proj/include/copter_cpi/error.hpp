#pragma once

#include <stdexcept>

namespace copter_cpi {

/// Contract violations and unrecoverable numerical conditions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace copter_cpi
