#pragma once

#include <stdexcept>
#include <string>

namespace mclab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rejected input: malformed chains, bad indices, inconsistent arguments.
class InputError : public Error {
public:
    using Error::Error;
};

/// A numerical routine failed (singular system, eigen solver, optimizer).
class NumericalError : public Error {
public:
    using Error::Error;
};

#define MCLAB_DEFINE_ERROR(Name, Base)  \
    class Name : public Base {          \
    public:                             \
        using Base::Base;               \
    }

MCLAB_DEFINE_ERROR(RowSumError, InputError);
MCLAB_DEFINE_ERROR(DisconnectedError, InputError);
MCLAB_DEFINE_ERROR(NotReversibleError, InputError);
MCLAB_DEFINE_ERROR(NegativeRateError, InputError);
MCLAB_DEFINE_ERROR(RowOverflowError, InputError);
MCLAB_DEFINE_ERROR(DomainError, InputError);
MCLAB_DEFINE_ERROR(DimensionError, InputError);
MCLAB_DEFINE_ERROR(IndexError, InputError);
MCLAB_DEFINE_ERROR(OverlapError, InputError);
MCLAB_DEFINE_ERROR(NotNeighborsError, InputError);
MCLAB_DEFINE_ERROR(MethodMismatchError, InputError);
MCLAB_DEFINE_ERROR(NegativeInputError, InputError);
MCLAB_DEFINE_ERROR(InfeasibleError, InputError);
MCLAB_DEFINE_ERROR(ParseError, InputError);
MCLAB_DEFINE_ERROR(UnknownQuantityError, InputError);

MCLAB_DEFINE_ERROR(SingularSystemError, NumericalError);
MCLAB_DEFINE_ERROR(EigenFailure, NumericalError);
MCLAB_DEFINE_ERROR(ConvergenceFailure, NumericalError);

#undef MCLAB_DEFINE_ERROR

}  // namespace mclab
