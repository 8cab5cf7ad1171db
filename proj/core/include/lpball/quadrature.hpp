#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace lpball {

/// Tolerances for the adaptive integrator.
struct QuadratureSpec {
    double rel_tol = 1e-10;  // in (0, 1e-4]
    int max_subdivisions = 200;  // >= 16

    void validate() const {
        if (!(rel_tol > 0.0) || rel_tol > 1e-4)
            throw std::invalid_argument("QuadratureSpec: rel_tol must be in (0, 1e-4]");
        if (max_subdivisions < 16)
            throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 16");
    }
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;   // estimated
    int subdivisions = 0;
    bool converged = false;
};

/// Thrown when the subdivision budget is exhausted before the requested
/// tolerance is met; carries the best value and the achieved error.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, QuadratureResult best)
        : std::runtime_error(what), best_(best) {}
    const QuadratureResult& best() const { return best_; }

private:
    QuadratureResult best_;
};

/// Adaptive Gauss-Kronrod (7-15) integration over a finite interval.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureSpec& spec = {});

/// Integral over [a, inf), mapped to [0, 1) by u = t/(1+t) (t = u/(1-u)).
QuadratureResult integrate_to_inf(const std::function<double(double)>& f, double a,
                                  const QuadratureSpec& spec = {});

/// Convenience wrappers that throw QuadratureError on non-convergence.
double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          const QuadratureSpec& spec = {});
double integrate_to_inf_or_throw(const std::function<double(double)>& f, double a,
                                 const QuadratureSpec& spec = {});

} // namespace lpball
