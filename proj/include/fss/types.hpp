#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace fss {

using cplx = std::complex<double>;

constexpr double PI = 3.14159265358979323846264338327950288;

/// Thrown when an iterative solve exceeds its iteration budget.
/// Carries the residual history so callers can inspect the failure mode.
struct DivergenceError : std::runtime_error {
    std::vector<double> residual_history;
    DivergenceError(const std::string& msg, std::vector<double> hist)
        : std::runtime_error(msg), residual_history(std::move(hist)) {}
};

/// Thrown when a root cannot be bracketed inside the search window.
struct BracketingError : std::runtime_error {
    std::string which;
    BracketingError(const std::string& msg, std::string which_source)
        : std::runtime_error(msg), which(std::move(which_source)) {}
};

/// Thrown when a solution violates a structural condition (positivity,
/// monotonicity at a real root, ...) that the formalism requires.
struct BreakdownError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Uniformly sampled interval of the rapidity line carrying complex values.
struct Grid {
    double x_min = 0.0;
    double x_max = 0.0;
    std::vector<cplx> values;

    Grid() = default;
    Grid(double a, double b, std::size_t n) : x_min(a), x_max(b), values(n) {
        check();
    }
    Grid(double a, double b, std::vector<cplx> v)
        : x_min(a), x_max(b), values(std::move(v)) {
        check();
    }

    std::size_t n() const { return values.size(); }
    double h() const { return (x_max - x_min) / double(values.size() - 1); }
    double x(std::size_t i) const { return x_min + double(i) * h(); }

    bool same_axis(const Grid& o) const {
        return x_min == o.x_min && x_max == o.x_max && n() == o.n();
    }

  private:
    void check() const {
        if (values.size() < 2)
            throw std::domain_error("Grid: need at least 2 points");
        if (!(x_max > x_min))
            throw std::domain_error("Grid: x_max must exceed x_min");
    }
};

enum class Regime { Attractive, FreeFermion, Repulsive };

/// Sine-Gordon coupling in its various equivalent parametrizations.
struct Coupling {
    double p = 1.0;        // p = beta^2 / (8 pi - beta^2)
    double beta_sq = 0.0;  // beta^2
    double gamma = 0.0;    // gamma = 8 pi p
    double r_sq = 0.0;     // compactification radius squared, R^2 = 4 pi / beta^2
    double gamma_6v = 0.0; // six-vertex anisotropy, gamma_6v = pi / (p + 1)
    Regime regime = Regime::FreeFermion;

    static Coupling from_p(double p);
    static Coupling from_beta_sq(double beta_sq);
};

inline Coupling Coupling::from_p(double p) {
    if (!(p > 0.0) || !std::isfinite(p))
        throw std::domain_error("Coupling: p must be positive and finite");
    Coupling c;
    c.p = p;
    c.beta_sq = 8.0 * PI * p / (1.0 + p);
    c.gamma = 8.0 * PI * p;
    c.r_sq = 4.0 * PI / c.beta_sq;
    c.gamma_6v = PI / (p + 1.0);
    c.regime = (p < 1.0)   ? Regime::Attractive
               : (p > 1.0) ? Regime::Repulsive
                           : Regime::FreeFermion;
    return c;
}

inline Coupling Coupling::from_beta_sq(double beta_sq) {
    if (!(beta_sq > 0.0) || !(beta_sq < 8.0 * PI))
        throw std::domain_error("Coupling: beta^2 must lie in (0, 8 pi)");
    return from_p(beta_sq / (8.0 * PI - beta_sq));
}

/// Knobs of the damped fixed-point engine.
struct IterationConfig {
    double damping = 1.0;
    double tol_function = 1e-10;
    double tol_sources = 1e-10;
    int max_iter = 500;

    void check() const {
        if (!(damping > 0.0) || damping > 1.0)
            throw std::domain_error("IterationConfig: damping must be in (0,1]");
        if (!(tol_function > 0.0) || !(tol_sources > 0.0))
            throw std::domain_error("IterationConfig: tolerances must be positive");
        if (max_iter < 1)
            throw std::domain_error("IterationConfig: max_iter must be positive");
    }
};

struct ConvergenceReport {
    int iterations_used = 0;
    double final_residual = 0.0;
    double contraction_estimate = 0.0;
    bool fallback_used = false;
};

} // namespace fss
