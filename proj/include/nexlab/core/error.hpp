#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace nexlab {

enum class ErrorKind { input, schema, internal, resource, diagnostics, io, config };

const char* to_string(ErrorKind kind) noexcept;

// A double for error messages; std::to_string would print 1e-8 as 0.000000.
inline std::string message_number(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

/// Base of every error raised by the library. The kind drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct InputError : Error {
  explicit InputError(const std::string& m) : Error(ErrorKind::input, m) {}
};
struct SchemaError : Error {
  explicit SchemaError(const std::string& m) : Error(ErrorKind::schema, m) {}
};
struct InternalError : Error {
  explicit InternalError(const std::string& m) : Error(ErrorKind::internal, m) {}
};
struct ResourceError : Error {
  explicit ResourceError(const std::string& m) : Error(ErrorKind::resource, m) {}
};
struct DiagnosticsError : Error {
  explicit DiagnosticsError(const std::string& m) : Error(ErrorKind::diagnostics, m) {}
};
struct IoError : Error {
  explicit IoError(const std::string& m) : Error(ErrorKind::io, m) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& m) : Error(ErrorKind::config, m) {}
};

}  // namespace nexlab
