#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cavspin {

// Malformed problem instance: bad indices, self-loops, size mismatches.
class InvalidInstance : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Physical or numerical parameter outside its admissible range.
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Gain does not exceed the losses, so no condensate forms.
class BelowThreshold : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A spin mode carries no intensity, so its phase is undefined.
class EmptyCondensate : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Instance exceeds what the exact enumerators can handle.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Divergence : public std::runtime_error {
public:
    Divergence(std::size_t mode, double time)
        : std::runtime_error("non-finite amplitude in mode " + std::to_string(mode) +
                             " at t=" + std::to_string(time)),
          mode_(mode),
          time_(time) {}

    std::size_t mode() const noexcept { return mode_; }
    double time() const noexcept { return time_; }

private:
    std::size_t mode_;
    double time_;
};

}  // namespace cavspin
