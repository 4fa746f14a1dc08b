#pragma once

#include <stdexcept>
#include <string>

namespace ccv {

/// Base class for all engine errors. `kind()` is a stable, machine-parsable
/// class name used as the error prefix on the command line.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(msg), kind_(std::move(kind)) {}

    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

#define CCV_DEFINE_ERROR(Name)                                          \
    class Name : public Error {                                         \
    public:                                                              \
        explicit Name(const std::string& msg) : Error(#Name, msg) {}     \
    }

CCV_DEFINE_ERROR(SchemaMismatch);
CCV_DEFINE_ERROR(NotApplicable);
CCV_DEFINE_ERROR(StateSpaceTooLarge);
CCV_DEFINE_ERROR(InvalidView);
CCV_DEFINE_ERROR(NoConstructiveComplement);
CCV_DEFINE_ERROR(InvalidViewUpdate);
CCV_DEFINE_ERROR(NotTranslatable);
CCV_DEFINE_ERROR(NullNotSupported);
CCV_DEFINE_ERROR(MissingKeyMetadata);
CCV_DEFINE_ERROR(NotATranslator);
CCV_DEFINE_ERROR(StrategyMismatch);
CCV_DEFINE_ERROR(ParseError);
CCV_DEFINE_ERROR(ResolutionError);

#undef CCV_DEFINE_ERROR

} // namespace ccv
