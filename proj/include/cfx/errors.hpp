#pragma once

#include <stdexcept>

namespace cfx {

// Input outside an operation's domain (bad digits, empty words, malformed
// intervals, violated preconditions).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A digit or bound could not be certified at the working precision.
class PrecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An exact computation would exceed its configured size budget.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace cfx
