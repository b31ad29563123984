#include "fss/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fss/quadrature.hpp"

namespace fss::solver {

namespace {

double sup_norm(const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

FixedPointResult fixed_point_solve(const VecMap& map, Vec initial,
                                   const IterationConfig& cfg) {
    cfg.check();
    FixedPointResult out;
    Vec f = std::move(initial);
    const std::size_t n = f.size();
    double damping = cfg.damping;
    Vec prev_delta;
    int flips = 0;

    for (int it = 1; it <= cfg.max_iter; ++it) {
        Vec g = map(f);
        if (g.size() != n)
            throw std::logic_error("fixed_point_solve: map changed the dimension");
        Vec delta(n);
        for (std::size_t i = 0; i < n; ++i) delta[i] = g[i] - f[i];
        const double res = sup_norm(delta);
        out.residual_history.push_back(res);

        if (res <= cfg.tol_function) {
            for (std::size_t i = 0; i < n; ++i) f[i] += damping * delta[i];
            out.fixed_point = std::move(f);
            out.report.iterations_used = it;
            out.report.final_residual = res;
            out.report.contraction_estimate =
                out.residual_history.size() >= 3
                    ? estimate_contraction(out.residual_history)
                    : 0.0;
            return out;
        }

        // oscillation watch: opposite update directions on consecutive sweeps
        if (!prev_delta.empty() && damping == 1.0) {
            double dot = 0.0, na = 0.0, nb = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                dot += delta[i] * prev_delta[i];
                na += delta[i] * delta[i];
                nb += prev_delta[i] * prev_delta[i];
            }
            if (na > 0.0 && nb > 0.0 && dot < -0.5 * std::sqrt(na * nb)) {
                if (++flips >= 3) damping = 0.5;
            } else {
                flips = 0;
            }
        }
        prev_delta = delta;
        for (std::size_t i = 0; i < n; ++i) f[i] += damping * delta[i];
    }
    throw DivergenceError("fixed_point_solve: max_iter exceeded (residual " +
                              std::to_string(out.residual_history.back()) + ")",
                          out.residual_history);
}

std::pair<Grid, ConvergenceReport>
fixed_point_solve(const std::function<Grid(const Grid&)>& map, const Grid& initial,
                  const IterationConfig& cfg) {
    const std::size_t n = initial.n();
    auto pack = [n](const Grid& g) {
        Vec v(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            v[2 * i] = g.values[i].real();
            v[2 * i + 1] = g.values[i].imag();
        }
        return v;
    };
    auto unpack = [&initial, n](const Vec& v) {
        Grid g(initial.x_min, initial.x_max, n);
        for (std::size_t i = 0; i < n; ++i) g.values[i] = cplx(v[2 * i], v[2 * i + 1]);
        return g;
    };
    auto vmap = [&](const Vec& v) { return pack(map(unpack(v))); };
    auto r = fixed_point_solve(vmap, pack(initial), cfg);
    return {unpack(r.fixed_point), r.report};
}

double estimate_contraction(const Vec& history) {
    if (history.size() < 3)
        throw std::domain_error("estimate_contraction: need at least 3 residuals");
    std::vector<double> ratios;
    for (std::size_t i = 0; i + 1 < history.size(); ++i) {
        if (!(history[i] > 0.0) || !(history[i + 1] > 0.0))
            throw std::domain_error(
                "estimate_contraction: residuals must be strictly positive");
        ratios.push_back(history[i + 1] / history[i]);
    }
    return median(ratios);
}

namespace {

double bisect_source(const SourceProblem& prob, Vec pos, std::size_t k,
                     double tol) {
    auto rk = [&](double x) {
        pos[k] = x;
        return prob.residual(pos)[k];
    };
    // scan for a sign change
    const int scan = 256;
    const double a = prob.x_min, b = prob.x_max;
    double xa = a, fa = rk(a);
    bool found = false;
    double xb = 0.0;
    for (int i = 1; i <= scan; ++i) {
        const double x = a + (b - a) * double(i) / scan;
        const double fx = rk(x);
        if (fa == 0.0) return xa;
        if (fa * fx <= 0.0) {
            xb = x;
            found = true;
            break;
        }
        xa = x;
        fa = fx;
    }
    if (!found)
        throw BracketingError("solve_source_positions: no sign change in [" +
                                  std::to_string(prob.x_min) + ", " +
                                  std::to_string(prob.x_max) + "] for source " +
                                  std::to_string(k),
                              "source " + std::to_string(k));
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (xa + xb);
        const double fm = rk(mid);
        if (std::abs(fm) <= tol || 0.5 * std::abs(xb - xa) < 1e-15) return mid;
        if (fa * fm <= 0.0) {
            xb = mid;
        } else {
            xa = mid;
            fa = fm;
        }
    }
    return 0.5 * (xa + xb);
}

} // namespace

Vec solve_source_positions(const SourceProblem& prob, Vec initial,
                           const IterationConfig& cfg, ConvergenceReport* report) {
    cfg.check();
    const std::size_t m = initial.size();
    Vec pos = std::move(initial);
    if (m == 0) return pos;

    std::vector<int> stall(m, 0);
    Vec prev_abs(m, std::numeric_limits<double>::infinity());
    bool fallback = false;
    std::vector<double> res_history;

    for (int it = 1; it <= cfg.max_iter; ++it) {
        Vec r = prob.residual(pos);
        const double rmax = sup_norm(r);
        res_history.push_back(rmax);
        if (rmax <= cfg.tol_sources) {
            if (report) {
                report->iterations_used = it;
                report->final_residual = rmax;
                report->fallback_used = fallback;
                report->contraction_estimate =
                    res_history.size() >= 3 ? estimate_contraction(res_history)
                                            : 0.0;
            }
            return pos;
        }
        // dilatation watch, per source
        bool need_bisect = !bool(prob.update);
        for (std::size_t k = 0; k < m; ++k) {
            const double a = std::abs(r[k]);
            stall[k] = a >= prev_abs[k] - 1e-16 ? stall[k] + 1 : 0;
            prev_abs[k] = a;
            if (stall[k] >= 5) need_bisect = true;
        }
        if (need_bisect) {
            fallback = fallback || bool(prob.update);
            for (std::size_t k = 0; k < m; ++k) {
                if (std::abs(r[k]) > cfg.tol_sources)
                    pos[k] = bisect_source(prob, pos, k, cfg.tol_sources);
            }
            std::fill(stall.begin(), stall.end(), 0);
            std::fill(prev_abs.begin(), prev_abs.end(),
                      std::numeric_limits<double>::infinity());
            continue;
        }
        pos = prob.update(pos);
        if (pos.size() != m)
            throw std::logic_error("solve_source_positions: update changed size");
    }
    Vec r = prob.residual(pos);
    if (sup_norm(r) <= cfg.tol_sources) {
        if (report) {
            report->iterations_used = cfg.max_iter;
            report->final_residual = sup_norm(r);
            report->fallback_used = fallback;
        }
        return pos;
    }
    throw DivergenceError("solve_source_positions: max_iter exceeded",
                          res_history);
}

} // namespace fss::solver
