#pragma once

#include <stdexcept>
#include <string>

namespace intent {

enum class ErrorKind {
    InvalidInput,
    Parameter,
    Precondition,
    Stream,
    UndefinedPose,
    Inconsistency,
    DuplicateGoal,
    UnknownGoal,
};

/// Base of every error raised by the estimator library.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

#define INTENT_DEFINE_ERROR(Name, Kind)                                          \
    class Name : public Error {                                                  \
    public:                                                                      \
        explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
    };

INTENT_DEFINE_ERROR(InvalidInputError, InvalidInput)
INTENT_DEFINE_ERROR(ParameterError, Parameter)
INTENT_DEFINE_ERROR(PreconditionError, Precondition)
INTENT_DEFINE_ERROR(StreamError, Stream)
INTENT_DEFINE_ERROR(UndefinedPoseError, UndefinedPose)
INTENT_DEFINE_ERROR(InconsistencyError, Inconsistency)
INTENT_DEFINE_ERROR(DuplicateGoalError, DuplicateGoal)
INTENT_DEFINE_ERROR(UnknownGoalError, UnknownGoal)

#undef INTENT_DEFINE_ERROR

}  // namespace intent
