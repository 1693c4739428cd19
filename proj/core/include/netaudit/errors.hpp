#pragma once

#include <stdexcept>
#include <string>

namespace netaudit {

// Base class for all library errors. Subtypes carry no extra state;
// they exist so callers can catch a precise failure mode.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// net-model
struct InvalidConfig : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct IllegalAllocation : Error { using Error::Error; };

// audit-math
struct ZeroInfluence : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct NoChangeToAttribute : Error { using Error::Error; };
struct TopologyMismatch : Error { using Error::Error; };

// pomdp-env
struct ActionOutOfRange : Error { using Error::Error; };
struct SteppingFinishedEpisode : Error { using Error::Error; };
struct EnvError : Error { using Error::Error; };

// dp-oracle
struct ZeroLinks : Error { using Error::Error; };
struct AmbiguousGrouping : Error { using Error::Error; };
struct GroupMismatch : Error { using Error::Error; };
struct NoChangeDetected : Error { using Error::Error; };
struct MultipleAgentsChanged : Error { using Error::Error; };

// dqn-agent
struct DimensionMismatch : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct InsufficientMemory : Error { using Error::Error; };
struct CheckpointMismatch : Error { using Error::Error; };

// harness
struct ParseError : Error { using Error::Error; };
struct ContractViolation : Error { using Error::Error; };
struct MissingArtifacts : Error { using Error::Error; };

}  // namespace netaudit
