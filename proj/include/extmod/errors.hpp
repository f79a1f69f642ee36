#pragma once

#include <stdexcept>
#include <string>

namespace extmod {

struct LengthMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SpecMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotExtensionDatum : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct IndexNotInI : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotEffective : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct PowerOutOfRange : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotPositive : std::domain_error {
    using std::domain_error::domain_error;
};

struct NotInjective : std::domain_error {
    using std::domain_error::domain_error;
};

struct WrongCase : std::domain_error {
    using std::domain_error::domain_error;
};

struct ConditionsFailed : std::domain_error {
    using std::domain_error::domain_error;
};

struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace extmod
