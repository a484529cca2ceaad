#pragma once

#include <stdexcept>
#include <string>

namespace ltpal {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (frames, rules, serialized systems).
class IngestError : public Error {
 public:
  using Error::Error;
};

/// A formula refers to something the model does not have (agent, world),
/// or still contains template placeholders.
class EvalError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration: bad scores, scorer failures, bad options.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ltpal
