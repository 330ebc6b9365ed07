#pragma once

#include <stdexcept>
#include <string>

namespace contprob {

// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// The a-marginal is degenerate (p_1 is 0 or 1).
class DegenerateA : public Error {
  public:
    explicit DegenerateA(const std::string& what) : Error(what) {}
};

// A probability parameter lies outside [0, 1].
class RangeError : public Error {
  public:
    explicit RangeError(const std::string& what) : Error(what) {}
};

class InvalidModel : public Error {
  public:
    explicit InvalidModel(const std::string& what) : Error(what) {}
};

class EmptyInput : public Error {
  public:
    explicit EmptyInput(const std::string& what) : Error(what) {}
};

// A conditional rate was requested for a branch with zero count.
class UndefinedRate : public Error {
  public:
    explicit UndefinedRate(const std::string& what) : Error(what) {}
};

// No auxiliary (tilde) ensemble was accumulated.
class MissingTilde : public Error {
  public:
    explicit MissingTilde(const std::string& what) : Error(what) {}
};

class ZeroDenominator : public Error {
  public:
    explicit ZeroDenominator(const std::string& what) : Error(what) {}
};

class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

class IoError : public Error {
  public:
    explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace contprob
