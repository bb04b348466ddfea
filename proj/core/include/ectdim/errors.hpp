#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ectdim {

/// Thrown when an improper integral fails to reach the requested tolerance.
/// Carries the error estimate that was actually achieved.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_error_(achieved) {}

    double achieved_error() const { return achieved_error_; }

private:
    double achieved_error_;
};

/// Thrown when no frequency yields an estimate in a feasible operating
/// region. Lists the region label encountered at each frequency so the
/// caller can tell whether the probe or the frequency range is at fault.
class InfeasibleError : public std::runtime_error {
public:
    InfeasibleError(const std::string& what, std::vector<std::string> regions)
        : std::runtime_error(what), regions_(std::move(regions)) {}

    const std::vector<std::string>& regions() const { return regions_; }

private:
    std::vector<std::string> regions_;
};

}  // namespace ectdim
