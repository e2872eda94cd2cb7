#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace meridian {

enum class ErrorKind {
  DegenerateCurve,
  FrameDegenerate,
  InvalidFrame,
  IntegrationFailure,
  InvalidGauge,
  InvalidParams,
  DomainExit,
  GaugeViolation,
  GaugeBoundary,
  InvalidFamily,
  LightlikeH,
  ZeroH,
  SignatureError,
  DegenerateTangent,
  OutOfDomain,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind so the
/// CLI can map it onto an exit code and batch drivers can record it.
class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace meridian
