#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>

#include "copter_cpi/cli/commands.hpp"

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_color_mt("copter-cpi");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("COPTER_CPI_LOG")) {
    spdlog::cfg::helpers::load_levels(level);
  }
  return copter_cpi::cli::run(argc, argv);
}
