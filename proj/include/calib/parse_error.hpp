#pragma once

#include <stdexcept>
#include <string>

namespace calib {

/// Text input error with a 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

}  // namespace calib
