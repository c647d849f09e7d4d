#ifndef FRLAB_ERROR_HPP
#define FRLAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace frlab
{
    /// Base class of every error raised by the library.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// An argument outside the mathematical domain of an operation (e.g. xi outside [-1, 1]).
    class DomainError : public Error
    {
    public:
        using Error::Error;
    };

    class IndexError : public Error
    {
    public:
        using Error::Error;
    };

    /// Precondition on a parameter record failed (wrong length, order too low, bad range).
    class InvalidArgument : public Error
    {
    public:
        using Error::Error;
    };

    class SingularMatrixError : public Error
    {
    public:
        using Error::Error;
    };

    /// An ESFR K matrix violated one of its three admissibility conditions.
    class ConditionViolation : public Error
    {
    public:
        ConditionViolation(std::string condition, const std::string& what)
            : Error(what), condition_(std::move(condition)) {}

        const std::string& condition() const noexcept { return condition_; }

    private:
        std::string condition_;
    };

    /// A correction function failed to meet h(-1), h(1) after construction.
    class BoundaryClosureError : public Error
    {
    public:
        using Error::Error;
    };

    /// Two eigenmodes are indistinguishable as the physical one.
    class AmbiguousModeError : public Error
    {
    public:
        AmbiguousModeError(int first, int second, const std::string& what)
            : Error(what), first_(first), second_(second) {}

        int first() const noexcept { return first_; }
        int second() const noexcept { return second_; }

    private:
        int first_;
        int second_;
    };

    class DegenerateModeError : public Error
    {
    public:
        using Error::Error;
    };
} // namespace frlab

#endif
