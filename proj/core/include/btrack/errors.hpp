#ifndef BTRACK_ERRORS_HPP
#define BTRACK_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace btrack {

// Base of every operation error. The `name()` string is stable and is what
// the CLI renders and tests match on; the message carries the details.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& msg)
        : std::runtime_error(msg), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define BTRACK_DEFINE_ERROR(Type)                                   \
    class Type : public Error {                                     \
    public:                                                         \
        explicit Type(const std::string& msg) : Error(#Type, msg) {} \
    }

BTRACK_DEFINE_ERROR(DivisionByZero);
BTRACK_DEFINE_ERROR(NotFinite);
BTRACK_DEFINE_ERROR(Undecided);
BTRACK_DEFINE_ERROR(NotEventuallyNonzero);
BTRACK_DEFINE_ERROR(DomainError);
BTRACK_DEFINE_ERROR(NegativeLeading);
BTRACK_DEFINE_ERROR(NoTransfer);
BTRACK_DEFINE_ERROR(UnboundVariable);
BTRACK_DEFINE_ERROR(NotDifferentiable);
BTRACK_DEFINE_ERROR(NotCauchy);
BTRACK_DEFINE_ERROR(NoSignChange);
BTRACK_DEFINE_ERROR(NonNumericValue);
BTRACK_DEFINE_ERROR(DegreeOverflow);
BTRACK_DEFINE_ERROR(ConstructionError);

#undef BTRACK_DEFINE_ERROR

// Parse failure with the byte offset of the offending token and the set of
// tokens that would have been accepted there.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, std::vector<std::string> expected,
               const std::string& msg)
        : Error("ParseError", msg), offset_(offset),
          expected_(std::move(expected)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

} // namespace btrack

#endif
