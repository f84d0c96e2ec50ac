#ifndef CYCPUF_ERRORS_HPP
#define CYCPUF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cycpuf {

/// Invalid construction parameters: bad dimensions, non-positive delays,
/// out-of-range feedback indices, malformed config files.
class ConfigError : public std::runtime_error {
      public:
	explicit ConfigError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Caller misuse of an otherwise valid object: width mismatches,
/// empty splits, inconsistent argument shapes.
class UsageError : public std::runtime_error {
      public:
	explicit UsageError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Filesystem / stream failures.
class IoError : public std::runtime_error {
      public:
	explicit IoError(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace cycpuf

#endif
