#pragma once

namespace event_distill {

/// Reads EVENT_DISTILL_LOG (trace|debug|info|warn|error|off, default warn)
/// and applies it to the library logger.
void init_logging_from_env();

}  // namespace event_distill
