#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace aqrm {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// 2eps + (n-k)omega = 0 somewhere in the Q recurrence
class ResonantParameterError : public Error {
public:
    ResonantParameterError(const std::string& what, int k) : Error(what), k_(k) {}
    int step() const noexcept { return k_; }

private:
    int k_;
};

// Evaluation at x = 0 (or another regular singular point)
class SingularPointError : public Error {
public:
    using Error::Error;
};

// cosh overflow, wavefunction under/overflow
class RangeError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Truncation doubling did not settle; carries the last two spectra.
class SpectrumConvergenceError : public ConvergenceError {
public:
    SpectrumConvergenceError(const std::string& what, std::vector<double> previous,
                             std::vector<double> last)
        : ConvergenceError(what), previous_(std::move(previous)), last_(std::move(last)) {}
    const std::vector<double>& previous() const noexcept { return previous_; }
    const std::vector<double>& last() const noexcept { return last_; }

private:
    std::vector<double> previous_;
    std::vector<double> last_;
};

// Bethe system failures: coincident roots (i, j) or a pole collision (i, -1).
class BetheError : public Error {
public:
    BetheError(const std::string& what, int i = -1, int j = -1) : Error(what), i_(i), j_(j) {}
    int first() const noexcept { return i_; }
    int second() const noexcept { return j_; }

private:
    int i_;
    int j_;
};

} // namespace aqrm
