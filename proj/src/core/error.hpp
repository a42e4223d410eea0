#pragma once

#include <stdexcept>
#include <string>

namespace tq {

enum class Errc {
  ok = 0,
  io_error,
  malformed_line,
  too_few_documents,
  empty_training_set,
  out_of_range,
  invalid_bitwidth,
  non_finite_input,
  corrupt_stream,
  rank_too_large,
  convergence_failure,
  dimension_mismatch,
  single_class_training,
  empty_evaluation,
  zero_reference_error,
  checksum_mismatch,
  download_failure,
  empty_store,
  invalid_config,
  internal,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void raise(Errc code, const std::string& message);

}  // namespace tq
