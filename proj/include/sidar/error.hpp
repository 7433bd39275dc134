#pragma once

#include <stdexcept>
#include <string>

namespace sidar {

enum class errc {
  degenerate_projection,
  invalid_dimension,
  plane_through_center,
  singular_calibration,
  degenerate_configuration,
  singular_homography,
  invalid_config,
  texture_missing,
  budget_invalid,
  io_failure,
  incomplete_artifacts,
  corrupt_manifest,
  missing_artifact,
  empty_corpus,
  unreadable_image,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::degenerate_projection: return "DegenerateProjection";
    case errc::invalid_dimension: return "InvalidDimension";
    case errc::plane_through_center: return "PlaneThroughCenter";
    case errc::singular_calibration: return "SingularCalibration";
    case errc::degenerate_configuration: return "DegenerateConfiguration";
    case errc::singular_homography: return "SingularHomography";
    case errc::invalid_config: return "InvalidConfig";
    case errc::texture_missing: return "TextureMissing";
    case errc::budget_invalid: return "BudgetInvalid";
    case errc::io_failure: return "IoFailure";
    case errc::incomplete_artifacts: return "IncompleteArtifacts";
    case errc::corrupt_manifest: return "CorruptManifest";
    case errc::missing_artifact: return "MissingArtifact";
    case errc::empty_corpus: return "EmptyCorpus";
    case errc::unreadable_image: return "UnreadableImage";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace sidar
