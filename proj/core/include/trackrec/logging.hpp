#pragma once

namespace trackrec {

// Routes library logging to stderr. Verbosity comes from TRACKREC_LOG
// (trace|debug|info|warn|error|off); defaults to warn.
void init_logging();

}  // namespace trackrec
