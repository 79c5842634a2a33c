#pragma once

#include <stdexcept>
#include <string>

namespace jamsim {

enum class Errc {
  disconnected,
  self_loop,
  duplicate_edge,
  index_out_of_range,
  out_of_order_attempt,
  invalid_interval,
  nonuniform_delta,
  out_of_order_event,
  domain_error,
  insufficient_samples,
  all_runs_unsettled,
  config_error,
  io_error,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace jamsim
