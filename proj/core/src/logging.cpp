#include "event_distill/logging.hpp"

#include <cstdlib>
#include <string>

#include <spdlog/spdlog.h>

namespace event_distill {

void init_logging_from_env() {
  const char* env = std::getenv("EVENT_DISTILL_LOG");
  auto level = spdlog::level::warn;
  if (env != nullptr && *env != '\0') {
    level = spdlog::level::from_str(env);  // unknown names map to off
    if (level == spdlog::level::off && std::string(env) != "off") {
      level = spdlog::level::warn;
      spdlog::warn("EVENT_DISTILL_LOG='{}' not recognized, using warn", env);
    }
  }
  spdlog::set_level(level);
}

}  // namespace event_distill
