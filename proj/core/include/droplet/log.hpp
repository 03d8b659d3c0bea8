#pragma once

#include <string_view>

namespace droplet {

// Messages go to stderr. The threshold comes from DROPLET_LOG (debug | info |
// warn), read once; the default is warn.
void log_debug(std::string_view msg);
void log_info(std::string_view msg);
void log_warn(std::string_view msg);

}  // namespace droplet
