#pragma once

#include <stdexcept>
#include <string>

namespace hamcap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define HAMCAP_DEFINE_ERROR(Name)                                                                  \
    class Name : public Error {                                                                    \
    public:                                                                                        \
        explicit Name(const std::string &what) : Error(#Name ": " + what) {}                       \
    };

HAMCAP_DEFINE_ERROR(InvalidConfig)
HAMCAP_DEFINE_ERROR(AmbiguousLift)
HAMCAP_DEFINE_ERROR(WrongClass)
HAMCAP_DEFINE_ERROR(InfeasibleSpec)
HAMCAP_DEFINE_ERROR(SingularPoint)
HAMCAP_DEFINE_ERROR(NotRadial)
HAMCAP_DEFINE_ERROR(NewtonDivergence)
HAMCAP_DEFINE_ERROR(NotMorseBott)
HAMCAP_DEFINE_ERROR(InvalidInterval)
HAMCAP_DEFINE_ERROR(InvalidHypothesis)
HAMCAP_DEFINE_ERROR(VerificationFailure)
HAMCAP_DEFINE_ERROR(ParseError)

#undef HAMCAP_DEFINE_ERROR

} // namespace hamcap
