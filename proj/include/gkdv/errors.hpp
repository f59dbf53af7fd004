#pragma once

#include <stdexcept>
#include <string>

namespace gkdv {

// Base class for all failures this library reports deliberately.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct GridTooSmall : Error { using Error::Error; };
struct BiorthogonalityFailure : Error { using Error::Error; };
struct RatioOverflow : Error { using Error::Error; };

struct NonConvergence : Error { using Error::Error; };
struct DegenerateRoots : Error { using Error::Error; };
struct BranchAmbiguity : Error { using Error::Error; };

struct ContractionFailure : Error { using Error::Error; };
struct LimitNotSettled : Error { using Error::Error; };
struct IllConditionedMatch : Error { using Error::Error; };

struct NearSingular : Error { using Error::Error; };
struct NotProjected : Error { using Error::Error; };

struct BlowupDetected : Error { using Error::Error; };
struct ResolutionLoss : Error { using Error::Error; };

struct NewtonDivergence : Error { using Error::Error; };
struct TubeExit : Error { using Error::Error; };

} // namespace gkdv
