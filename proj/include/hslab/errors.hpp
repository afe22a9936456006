#pragma once

#include <stdexcept>
#include <string>

namespace hslab {

// Maps onto CLI exit codes: Config -> 2, Numeric -> 3, Verification -> 4.
enum class ErrorKind { Config, Numeric, Verification };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& module, const std::string& name,
        const std::string& what)
      : std::runtime_error(module + "." + name + ": " + what),
        kind_(kind),
        code_(module + "." + name) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Module-qualified code, e.g. "fairway.ZeroMassError".
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

#define HSLAB_DEFINE_ERROR(Name, Kind)                                  \
  class Name : public Error {                                           \
   public:                                                              \
    Name(const std::string& module, const std::string& what)            \
        : Error(ErrorKind::Kind, module, #Name, what) {}                 \
  };

HSLAB_DEFINE_ERROR(BracketError, Numeric)
HSLAB_DEFINE_ERROR(NonMonotoneError, Numeric)
HSLAB_DEFINE_ERROR(DivergentIntegralError, Numeric)
HSLAB_DEFINE_ERROR(ZeroMassError, Numeric)
HSLAB_DEFINE_ERROR(WindowExhaustedError, Numeric)
HSLAB_DEFINE_ERROR(NonTerminationError, Numeric)
HSLAB_DEFINE_ERROR(ConvergenceError, Numeric)
HSLAB_DEFINE_ERROR(BudgetError, Numeric)
HSLAB_DEFINE_ERROR(ConfigError, Config)
HSLAB_DEFINE_ERROR(SchemaError, Config)
HSLAB_DEFINE_ERROR(DomainError, Config)
HSLAB_DEFINE_ERROR(VerificationError, Verification)

#undef HSLAB_DEFINE_ERROR

}  // namespace hslab
