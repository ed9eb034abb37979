#pragma once

#include <stdexcept>
#include <string>

namespace qdyn {

// Invalid or out-of-range user input. `field` names the offending config key
// or argument. CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// A numerical policy could not be satisfied (step-size cap, quadrature
// convergence, hermiticity of an assembled matrix). CLI maps this to exit
// code 3.
class PolicyError : public std::runtime_error {
 public:
  PolicyError(std::string policy, const std::string& what)
      : std::runtime_error(policy + ": " + what), policy_(std::move(policy)) {}
  const std::string& policy() const { return policy_; }

 private:
  std::string policy_;
};

}  // namespace qdyn
