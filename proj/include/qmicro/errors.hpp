#pragma once

#include <stdexcept>
#include <string>

namespace qmicro {

/// A gate that cannot be placed on the device (e.g. a CPhase whose operand
/// pair is not wired as a switchable coupling).
class UnschedulableError : public std::runtime_error {
public:
    explicit UnschedulableError(const std::string& what) : std::runtime_error(what) {}
};

/// Clock configuration that cannot carry the control word at all.
class InfeasibleClockError : public std::runtime_error {
public:
    explicit InfeasibleClockError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qmicro
