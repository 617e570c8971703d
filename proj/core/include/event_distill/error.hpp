#pragma once

#include <stdexcept>
#include <string>

namespace event_distill {

// Error classes map one-to-one onto CLI exit codes.
enum class ErrorKind {
  kInvalidArgument,  // contract violation by the caller
  kParse,            // malformed input data
  kConfig,           // bad configuration or flags
  kProvider,         // embedding provider failure
  kIo,               // filesystem / sink failure
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void throw_error(ErrorKind kind, const std::string& message);

// Prefixes the message with a stage name, keeping the kind.
Error with_context(const Error& error, const std::string& context);

}  // namespace event_distill
