#include "egoscene/core.hpp"

namespace egoscene {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kNoValidDepth: return "no-valid-depth";
    case ErrorKind::kNotFound: return "not-found";
    case ErrorKind::kParse: return "parse-error";
    case ErrorKind::kConsistency: return "consistency-error";
    case ErrorKind::kUndefinedDirection: return "undefined-direction";
    case ErrorKind::kIo: return "io-error";
    case ErrorKind::kConfig: return "config-error";
    case ErrorKind::kGeneration: return "generation-error";
  }
  return "unknown";
}

std::string to_string(const PixelRect& r) {
  return "(" + std::to_string(r.x1) + "," + std::to_string(r.y1) + "," +
         std::to_string(r.x2) + "," + std::to_string(r.y2) + ")";
}

}  // namespace egoscene
