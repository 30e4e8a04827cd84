#pragma once

#include <spdlog/spdlog.h>

namespace trackrec::log {

using spdlog::debug;
using spdlog::info;
using spdlog::warn;
using spdlog::error;

}  // namespace trackrec::log
