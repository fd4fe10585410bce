#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace geomir {

enum class ErrorKind {
  UndecodableImage,
  DegenerateImage,
  EmptyDataset,
  AllPruned,
  DimensionMismatch,
  InvalidNode,
  ParseError,
  DuplicateId,
  UnknownImage,
  EmptyIndex,
  UnknownParticle,
  CannotReleaseRoot,
  VersionMismatch,
  IoError,
  InvalidConfig,
  UnknownSession,
  SessionBusy,
};

constexpr std::string_view error_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::UndecodableImage: return "UndecodableImage";
    case ErrorKind::DegenerateImage: return "DegenerateImage";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::AllPruned: return "AllPruned";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidNode: return "InvalidNode";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::UnknownImage: return "UnknownImage";
    case ErrorKind::EmptyIndex: return "EmptyIndex";
    case ErrorKind::UnknownParticle: return "UnknownParticle";
    case ErrorKind::CannotReleaseRoot: return "CannotReleaseRoot";
    case ErrorKind::VersionMismatch: return "VersionMismatch";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::UnknownSession: return "UnknownSession";
    case ErrorKind::SessionBusy: return "SessionBusy";
  }
  return "Unknown";
}

/// Every failure raised by the library. `what()` is "<Name>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(error_name(kind)) + ": " + detail),
        kind_(kind),
        detail_(detail) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace geomir
