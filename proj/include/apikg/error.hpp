#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace apikg {

// Coarse failure classes; the CLI prints the token as the first field of its
// single-line error message.
enum class ErrorCategory {
    invalid_argument,
    schema,
    parse,
    io,
    not_found,
    numeric,
};

constexpr std::string_view to_string(ErrorCategory c) {
    switch (c) {
    case ErrorCategory::invalid_argument: return "invalid-argument";
    case ErrorCategory::schema: return "schema";
    case ErrorCategory::parse: return "parse";
    case ErrorCategory::io: return "io";
    case ErrorCategory::not_found: return "not-found";
    case ErrorCategory::numeric: return "numeric";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

}  // namespace apikg
