#pragma once
// Error taxonomy for the library. Every error carries a coarse category;
// the CLI maps categories to distinct exit codes.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cdindex {

enum class ErrorCategory { Parse, Validation, Mismatch, Io };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}
    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

struct DuplicateIdError : Error {
    explicit DuplicateIdError(std::string id_in)
        : Error(ErrorCategory::Validation, "duplicate publication id: " + id_in),
          id(std::move(id_in)) {}
    std::string id;
};

// An edge whose endpoint has no record in the network (src cites dst).
struct DanglingEdgeError : Error {
    DanglingEdgeError(std::string src_in, std::string dst_in)
        : Error(ErrorCategory::Validation,
                "dangling edge: " + src_in + " -> " + dst_in),
          src(std::move(src_in)), dst(std::move(dst_in)) {}
    std::string src;
    std::string dst;
};

// Two encodings of the same edge give irreconcilable years for the citer.
struct InconsistentEdgeError : Error {
    InconsistentEdgeError(std::string src_in, std::string dst_in, int year_a, int year_b)
        : Error(ErrorCategory::Validation,
                "inconsistent edge years for " + src_in + " -> " + dst_in + ": " +
                    std::to_string(year_a) + " vs " + std::to_string(year_b)),
          src(std::move(src_in)), dst(std::move(dst_in)) {}
    std::string src;
    std::string dst;
};

struct UnknownIdError : Error {
    explicit UnknownIdError(std::string id_in)
        : Error(ErrorCategory::Validation, "unknown publication id: " + id_in),
          id(std::move(id_in)) {}
    std::string id;
};

struct ParseError : Error {
    ParseError(std::string path_in, std::uint64_t line_in, const std::string& reason)
        : Error(ErrorCategory::Parse,
                path_in + ":" + std::to_string(line_in) + ": " + reason),
          path(std::move(path_in)), line(line_in) {}
    std::string path;
    std::uint64_t line;
};

struct EmptyInputError : Error {
    explicit EmptyInputError(const std::string& what_in)
        : Error(ErrorCategory::Validation, "empty input: " + what_in) {}
};

struct NonPositiveBinWidthError : Error {
    explicit NonPositiveBinWidthError(double width)
        : Error(ErrorCategory::Validation,
                "bin width must be positive, got " + std::to_string(width)) {}
};

struct MissingYearError : Error {
    explicit MissingYearError(std::string id_in)
        : Error(ErrorCategory::Validation, "no year known for publication: " + id_in),
          id(std::move(id_in)) {}
    std::string id;
};

struct NoOverlapError : Error {
    NoOverlapError() : Error(ErrorCategory::Validation, "label maps share no keys") {}
};

struct IoError : Error {
    explicit IoError(const std::string& message) : Error(ErrorCategory::Io, message) {}
};

} // namespace cdindex
