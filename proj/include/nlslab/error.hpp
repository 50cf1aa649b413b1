#pragma once

#include <stdexcept>
#include <string>

namespace nlslab {

enum class ErrorCode {
  invalid_input,        // non-finite samples, bad exponents, bad radii
  grid_too_coarse,      // operator needs more nodes than the grid has
  outside_validated_range,
  insufficient_data,    // too few times / snapshots
  resolution,           // snapshot spacing cannot resolve eta
  hypothesis_violated,  // e.g. technical_check mass window
  not_a_snapshot_time,
  io,
  config,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nlslab
