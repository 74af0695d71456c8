#ifndef DYNPERM_ERRORS_HPP
#define DYNPERM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dynperm {

// Size argument outside the supported range (n = 0, n < 2, ...).
class InvalidSize : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A transposition (a, a) or an edge {a, a}.
class InvalidTransposition : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ElementOutOfRange : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// No admissible move left, e.g. coagulative dynamics on a single cycle.
class ExhaustedDynamics : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// State objects that were expected to describe the same configuration do not.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class InsufficientData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace dynperm

#endif  // DYNPERM_ERRORS_HPP
