#pragma once

#include <stdexcept>
#include <string>

namespace augsindy {

enum class ErrorKind {
    Schema,
    Parse,
    Data,
    Spec,
    Parameter,
    BlowUp,
    Coverage,
    Shape,
    Collision,
    InsufficientData,
    Config,
    Alignment,
    UndefinedMetric,
    Io,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + " error: " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace augsindy
