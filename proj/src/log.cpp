#include "superlimb/log.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace superlimb::log {
namespace {

Level parse_env() {
  const char* env = std::getenv("SUPERLIMB_LOG");
  if (env == nullptr) return Level::Warn;
  const std::string value(env);
  if (value == "debug") return Level::Debug;
  if (value == "info") return Level::Info;
  return Level::Warn;
}

std::atomic<int>& current() {
  static std::atomic<int> level{static_cast<int>(parse_env())};
  return level;
}

const char* tag(Level level) {
  switch (level) {
    case Level::Debug: return "debug";
    case Level::Info: return "info";
    case Level::Warn: return "warn";
  }
  return "?";
}

}  // namespace

Level threshold() { return static_cast<Level>(current().load()); }

void set_threshold(Level level) { current().store(static_cast<int>(level)); }

void write(Level level, std::string_view message) {
  if (static_cast<int>(level) < current().load()) return;
  std::fprintf(stderr, "[superlimb %s] %.*s\n", tag(level), static_cast<int>(message.size()),
               message.data());
}

}  // namespace superlimb::log
