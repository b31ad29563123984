#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fss/solver.hpp"
#include "fss/types.hpp"

using namespace fss;
using namespace fss::solver;

TEST_CASE("identity map converges immediately") {
    IterationConfig cfg;
    auto r = fixed_point_solve([](const Vec& v) { return v; }, Vec{1.0, -2.0, 3.0},
                               cfg);
    CHECK(r.report.iterations_used == 1);
    CHECK(r.report.final_residual == 0.0);
}

TEST_CASE("constant map lands on the constant") {
    IterationConfig cfg;
    cfg.damping = 0.7;
    const Vec nu{0.5, -1.25};
    auto r = fixed_point_solve([&](const Vec&) { return nu; }, Vec{9.0, 9.0}, cfg);
    CHECK(std::abs(r.fixed_point[0] - nu[0]) < 10 * cfg.tol_function);
    CHECK(std::abs(r.fixed_point[1] - nu[1]) < 10 * cfg.tol_function);
}

TEST_CASE("divergence carries the residual history") {
    IterationConfig cfg;
    cfg.max_iter = 20;
    auto bad = [](const Vec& v) { return Vec{2.0 * v[0] + 1.0}; };
    try {
        fixed_point_solve(bad, Vec{1.0}, cfg);
        CHECK(false);
    } catch (const DivergenceError& e) {
        CHECK(e.residual_history.size() == 20);
        CHECK(e.residual_history.back() > e.residual_history.front());
    }
}

TEST_CASE("re-applying the map moves a converged solution very little") {
    IterationConfig cfg;
    auto map = [](const Vec& v) {
        Vec g(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            g[i] = 0.4 * std::tanh(v[i]) + 0.1 * double(i);
        return g;
    };
    auto r = fixed_point_solve(map, Vec{0.0, 0.0, 0.0}, cfg);
    auto again = map(r.fixed_point);
    for (std::size_t i = 0; i < again.size(); ++i)
        CHECK(std::abs(again[i] - r.fixed_point[i]) <= 2.0 * cfg.tol_function);
}

TEST_CASE("damping does not move the fixed point") {
    auto map = [](const Vec& v) { return Vec{0.3 * v[0] + 1.0}; };
    IterationConfig full, half;
    half.damping = 0.5;
    auto a = fixed_point_solve(map, Vec{0.0}, full);
    auto b = fixed_point_solve(map, Vec{0.0}, half);
    CHECK(std::abs(a.fixed_point[0] - b.fixed_point[0]) <= 10.0 * full.tol_function);
    CHECK(std::abs(a.fixed_point[0] - 1.0 / 0.7) < 1e-9);
}

TEST_CASE("contraction estimate") {
    CHECK(estimate_contraction({1.0, 0.5, 0.25}) == doctest::Approx(0.5));
    CHECK(estimate_contraction({1.0, 2.0, 4.0}) == doctest::Approx(2.0));
    CHECK(estimate_contraction({1.0, 2.0, 4.0}) > 1.0); // dilatation flag
    CHECK_THROWS_AS((void)estimate_contraction({1.0, 0.5}), std::domain_error);
    CHECK_THROWS_AS((void)estimate_contraction({1.0, 0.0, 1.0}), std::domain_error);
}

TEST_CASE("free-fermion hole position from the log-form iteration") {
    // l sinh(h) = pi with l = 10; chi vanishes at the free-fermion point
    const double l = 10.0;
    SourceProblem prob;
    prob.residual = [&](const Vec& h) { return Vec{l * std::sinh(h[0]) - PI}; };
    prob.update = [&](const Vec&) { return Vec{std::asinh(PI / l)}; };
    prob.x_min = -5.0;
    prob.x_max = 5.0;
    IterationConfig cfg;
    ConvergenceReport rep;
    auto pos = solve_source_positions(prob, Vec{0.0}, cfg, &rep);
    CHECK(std::abs(pos[0] - std::asinh(PI / 10.0)) < 1e-10);
    CHECK_FALSE(rep.fallback_used);
}

TEST_CASE("symmetric targets give symmetric positions") {
    const double l = 7.0;
    SourceProblem prob;
    prob.residual = [&](const Vec& h) {
        return Vec{l * std::sinh(h[0]) + PI, l * std::sinh(h[1]) - PI};
    };
    prob.update = [&](const Vec&) {
        return Vec{std::asinh(-PI / l), std::asinh(PI / l)};
    };
    IterationConfig cfg;
    auto pos = solve_source_positions(prob, Vec{-0.1, 0.1}, cfg);
    CHECK(std::abs(pos[0] + pos[1]) < 1e-12);
}

TEST_CASE("dilatation triggers the bisection fallback") {
    // fixed-point form with slope magnitude 2 at the root: iteration dilates
    const double root = 0.7;
    SourceProblem prob;
    prob.residual = [&](const Vec& t) { return Vec{2.0 * (t[0] - root)}; };
    prob.update = [&](const Vec& t) { return Vec{t[0] - 3.0 * (t[0] - root)}; };
    prob.x_min = -4.0;
    prob.x_max = 4.0;
    IterationConfig cfg;
    ConvergenceReport rep;
    auto pos = solve_source_positions(prob, Vec{0.3}, cfg, &rep);
    CHECK(std::abs(pos[0] - root) < 1e-9);
    CHECK(rep.fallback_used);
}

TEST_CASE("unbracketable source names the offender") {
    SourceProblem prob;
    prob.residual = [](const Vec& t) { return Vec{t[0] * t[0] + 1.0}; };
    prob.x_min = -2.0;
    prob.x_max = 2.0;
    IterationConfig cfg;
    CHECK_THROWS_AS((void)solve_source_positions(prob, Vec{0.0}, cfg),
                    BracketingError);
    try {
        (void)solve_source_positions(prob, Vec{0.0}, cfg);
    } catch (const BracketingError& e) {
        CHECK(e.which == "source 0");
    }
}

TEST_CASE("monotone quantizer keeps positions ordered") {
    // strictly increasing counting function, strictly increasing targets
    const double l = 4.0;
    auto Z = [&](double t) { return l * std::sinh(t) + 0.3 * t; };
    const Vec targets{-3.0 * PI, -PI, PI, 3.0 * PI};
    SourceProblem prob;
    prob.residual = [&](const Vec& t) {
        Vec r(t.size());
        for (std::size_t k = 0; k < t.size(); ++k) r[k] = Z(t[k]) - targets[k];
        return r;
    };
    prob.x_min = -4.0;
    prob.x_max = 4.0;
    IterationConfig cfg;
    auto pos = solve_source_positions(prob, Vec{0.0, 0.0, 0.0, 0.0}, cfg);
    for (std::size_t k = 0; k + 1 < pos.size(); ++k) CHECK(pos[k] < pos[k + 1]);
}
