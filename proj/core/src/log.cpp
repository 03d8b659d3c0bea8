#include "droplet/log.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <memory>
#include <string>

namespace droplet {

namespace {

spdlog::logger& logger() {
    static const std::shared_ptr<spdlog::logger> instance = [] {
        auto log = spdlog::stderr_color_mt("droplet");
        log->set_pattern("[%l] %v");
        spdlog::level::level_enum level = spdlog::level::warn;
        if (const char* env = std::getenv("DROPLET_LOG")) {
            const std::string value(env);
            if (value == "debug") level = spdlog::level::debug;
            else if (value == "info") level = spdlog::level::info;
        }
        log->set_level(level);
        return log;
    }();
    return *instance;
}

}  // namespace

void log_debug(std::string_view msg) { logger().debug("{}", msg); }
void log_info(std::string_view msg) { logger().info("{}", msg); }
void log_warn(std::string_view msg) { logger().warn("{}", msg); }

}  // namespace droplet
