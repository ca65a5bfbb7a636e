#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nojs {

// Base of every error raised by the analyzer. Callers that only need to
// distinguish "bad input" from programming errors can catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DecodeError : public Error {
 public:
  using Error::Error;
};

class SelectorSyntaxError : public Error {
 public:
  using Error::Error;
};

// A precondition of a metric function was violated (scope mismatch,
// missing aggregate member, inconsistent counts).
class ContractError : public Error {
 public:
  using Error::Error;
};

class SuffixOnlyError : public Error {
 public:
  using Error::Error;
};

class RecordError : public Error {
 public:
  using Error::Error;
};

class PairingError : public Error {
 public:
  PairingError(const std::string& what, std::vector<std::string> orphans = {})
      : Error(what), orphans_(std::move(orphans)) {}

  const std::vector<std::string>& orphans() const { return orphans_; }

 private:
  std::vector<std::string> orphans_;
};

class EmptyCorpusError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A serialized report does not follow the report schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace nojs
