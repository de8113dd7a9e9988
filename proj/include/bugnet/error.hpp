#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bugnet {

enum class Errc {
    MalformedLine,
    OrphanEvent,
    DuplicateCreate,
    CalledOnUnresolved,
    UnlabeledCategory,
    UnsortedInput,
    NoConvergence,
    EmptySample,
    EmptyDataset,
    NoLccMembers,
    SingleClassTraining,
    LengthMismatch,
    InvalidConfig,
    Io,
};

const char* errc_name(Errc c);

/// Library-wide error type. `line()` is nonzero only for input errors that
/// originate from a specific line of an event file.
class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message, std::size_t line = 0)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message),
          code_(code),
          line_(line) {}

    Errc code() const { return code_; }
    std::size_t line() const { return line_; }

private:
    Errc code_;
    std::size_t line_;
};

}  // namespace bugnet
