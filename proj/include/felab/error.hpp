#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace felab {

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad argument or malformed input data.
class input_error : public error {
public:
    using error::error;
};

// A configured cap (memory, element count, search nodes) would be exceeded.
class resource_error : public error {
public:
    using error::error;
};

// A set was queried beyond the horizon where its membership is known.
class precision_error : public error {
public:
    precision_error(const std::string& what, std::uint64_t required)
        : error(what + " (needs horizon >= " + std::to_string(required) + ")"),
          required_horizon_(required) {}

    std::uint64_t required_horizon() const noexcept { return required_horizon_; }

private:
    std::uint64_t required_horizon_;
};

// The requested analysis does not apply to the given input.
class inapplicable_error : public error {
public:
    using error::error;
};

class parse_error : public error {
public:
    parse_error(const std::string& msg, std::size_t line, std::size_t column)
        : error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace felab
