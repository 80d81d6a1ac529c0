#pragma once

#include <stdexcept>
#include <string>

namespace dchne {

// Invalid configuration detected before a run starts.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Bad command-line usage or an unknown export format.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An election was requested over a network with no alive node.
class EmptyNetworkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Summaries handed to compare() do not form (scenario, seed) groups with one
// dchne run and distinct baselines.
class GroupingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace dchne
