#pragma once

#include <stdexcept>
#include <string>

namespace vatlas {

// Broad failure classes; the CLI maps them onto exit codes.
enum class ErrorKind {
  Input,         // malformed config, bad curve data
  Geometry,      // tangential contact, degenerate configuration, bad mesh params
  Numerical,     // singular systems, failed factorizations, inverted triangles
  Verification,  // a cross-check between two independent routes disagreed
};

class AtlasError : public std::runtime_error {
public:
  AtlasError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

inline AtlasError input_error(const std::string& msg) {
  return AtlasError(ErrorKind::Input, msg);
}
inline AtlasError geometry_error(const std::string& msg) {
  return AtlasError(ErrorKind::Geometry, msg);
}
inline AtlasError numerical_error(const std::string& msg) {
  return AtlasError(ErrorKind::Numerical, msg);
}
inline AtlasError verification_error(const std::string& msg) {
  return AtlasError(ErrorKind::Verification, msg);
}

}  // namespace vatlas
