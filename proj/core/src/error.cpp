#include "event_distill/error.hpp"

namespace event_distill {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid argument";
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kConfig: return "config error";
    case ErrorKind::kProvider: return "provider error";
    case ErrorKind::kIo: return "io error";
  }
  return "error";
}

void throw_error(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

Error with_context(const Error& error, const std::string& context) {
  return Error(error.kind(), context + ": " + error.what());
}

}  // namespace event_distill
