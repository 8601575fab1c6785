#pragma once

#include <stdexcept>
#include <string>

namespace dpprice {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No feasible follower response exists (set cover without a cover).
class FollowerInfeasible : public Error {
 public:
  using Error::Error;
};

class SizeLimitExceeded : public Error {
 public:
  using Error::Error;
};

class OracleTooLarge : public SizeLimitExceeded {
 public:
  using SizeLimitExceeded::SizeLimitExceeded;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class LpStalled : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dpprice
