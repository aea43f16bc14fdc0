#ifndef PEVSIM_ERRORS_HPP
#define PEVSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pevsim {

// Error taxonomy mirrors the process exit codes: 1 domain, 2 config,
// 3 verification.
enum class ErrorCode : int { domain = 1, config = 2, verification = 3 };

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, std::string msg) : std::runtime_error(std::move(msg)), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

struct DomainError : Error {
    explicit DomainError(std::string m) : Error(ErrorCode::domain, std::move(m)) {}
};
struct ConfigError : Error {
    explicit ConfigError(std::string m) : Error(ErrorCode::config, std::move(m)) {}
};
struct VerificationError : Error {
    explicit VerificationError(std::string m) : Error(ErrorCode::verification, std::move(m)) {}
};

struct NonConvexWeights : DomainError { using DomainError::DomainError; };
struct ZeroRequest : DomainError { using DomainError::DomainError; };
struct NoStations : DomainError { using DomainError::DomainError; };
struct StepLimitExceeded : DomainError { using DomainError::DomainError; };
struct Unreachable : DomainError { using DomainError::DomainError; };
struct GraphParseError : ConfigError { using ConfigError::ConfigError; };
struct DisconnectedGraph : ConfigError { using ConfigError::ConfigError; };
struct InsufficientBalance : DomainError { using DomainError::DomainError; };
struct InvalidParents : DomainError { using DomainError::DomainError; };
struct AlreadySettled : DomainError { using DomainError::DomainError; };
struct NotAtStation : DomainError { using DomainError::DomainError; };
struct EmptyRun : DomainError { using DomainError::DomainError; };
struct ZeroEnergy : DomainError { using DomainError::DomainError; };

} // namespace pevsim

#endif
