#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace relend {

enum class ErrorKind {
  Config,
  UnsupportedFamily,
  Internal,
  VertexOutsideBall,
  InsufficientRadius,
  NotOneEnded,
  NoStabilization,
  NotFound,
  SearchSpaceTooLarge,
  NotACocycle,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorKind::Internal: return "InternalError";
    case ErrorKind::VertexOutsideBall: return "VertexOutsideBall";
    case ErrorKind::InsufficientRadius: return "InsufficientRadius";
    case ErrorKind::NotOneEnded: return "NotOneEnded";
    case ErrorKind::NoStabilization: return "NoStabilization";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
    case ErrorKind::NotACocycle: return "NotACocycle";
  }
  return "Error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace relend
