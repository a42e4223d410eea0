#include "core/error.hpp"

namespace tq {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::ok: return "Ok";
    case Errc::io_error: return "IoError";
    case Errc::malformed_line: return "MalformedLine";
    case Errc::too_few_documents: return "TooFewDocuments";
    case Errc::empty_training_set: return "EmptyTrainingSet";
    case Errc::out_of_range: return "OutOfRange";
    case Errc::invalid_bitwidth: return "InvalidBitwidth";
    case Errc::non_finite_input: return "NonFiniteInput";
    case Errc::corrupt_stream: return "CorruptStream";
    case Errc::rank_too_large: return "RankTooLarge";
    case Errc::convergence_failure: return "ConvergenceFailure";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::single_class_training: return "SingleClassTraining";
    case Errc::empty_evaluation: return "EmptyEvaluation";
    case Errc::zero_reference_error: return "ZeroReferenceError";
    case Errc::checksum_mismatch: return "ChecksumMismatch";
    case Errc::download_failure: return "DownloadFailure";
    case Errc::empty_store: return "EmptyStore";
    case Errc::invalid_config: return "InvalidConfig";
    case Errc::internal: return "Internal";
  }
  return "Unknown";
}

Error::Error(Errc code, std::string message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + std::move(message)),
      code_(code) {}

void raise(Errc code, const std::string& message) { throw Error(code, message); }

}  // namespace tq
