#include "fss/tba.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fss/quadrature.hpp"
#include "fss/solver.hpp"

namespace fss::tba {

namespace {

constexpr double X_MIN = -30.0;
constexpr double X_MAX = 35.0;
constexpr std::size_t N_GRID = 4096;

struct Workspace {
    int S = 0;                      // number of strips
    std::size_t n = N_GRID;
    double h = 0.0;
    std::vector<double> x;          // grid abscissae
    std::vector<double> cosh_row;   // kernel at lag (i-j) h
    std::vector<std::vector<double>> d;    // current iterate per strip
    std::vector<std::vector<double>> logd1;// log(1+d^q)
    std::vector<Spline> logd1_spline;
    std::vector<std::vector<double>> zeros;

    explicit Workspace(int strips) : S(strips) {
        h = (X_MAX - X_MIN) / double(n - 1);
        x.resize(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = X_MIN + h * double(i);
        cosh_row.resize(2 * n - 1);
        for (std::size_t j = 0; j < cosh_row.size(); ++j) {
            const double s = (double(j) - double(n - 1)) * h;
            cosh_row[j] = 1.0 / (2.0 * PI * std::cosh(s));
        }
        d.assign(S, std::vector<double>(n, 0.0));
        logd1.assign(S, std::vector<double>(n, 0.0));
        logd1_spline.resize(S);
        zeros.assign(S, {});
    }
};

// Int_{s}^{inf} dy / cosh(y): right-tail mass of the cosh kernel
double cosh_tail(double s) { return 2.0 * std::atan(std::exp(-s)); }

void refresh_log(Workspace& ws) {
    for (int q = 0; q < ws.S; ++q) {
        for (std::size_t i = 0; i < ws.n; ++i) {
            const double v = ws.d[q][i];
            if (v <= -1.0)
                throw BreakdownError(
                    "solve_tba: positivity 1 + d^q > 0 violated in strip " +
                    std::to_string(q + 1));
            ws.logd1[q][i] = std::log1p(v);
        }
        ws.logd1_spline[q].build(X_MIN, ws.h, ws.logd1[q]);
    }
}

// cosh convolution of log(1+d^r) with constant-asymptote tail corrections
std::vector<double> strip_convolution(const Workspace& ws, int r) {
    const std::size_t n = ws.n;
    const auto& f = ws.logd1[r];
    const double c_left = f.front(), c_right = f.back();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        const double* row = ws.cosh_row.data() + (n - 1) + i; // index with -j
        for (std::size_t j = 0; j < n; ++j) {
            const double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
            acc += w * f[j] * row[-std::ptrdiff_t(j)];
        }
        out[i] = acc * ws.h;
        out[i] += c_left * cosh_tail(ws.x[i] - X_MIN) / (2.0 * PI);
        out[i] += c_right * cosh_tail(X_MAX - ws.x[i]) / (2.0 * PI);
    }
    return out;
}

// principal-value sinh convolution of log(1+d^r) at an arbitrary point,
// with linear-model subtraction and constant-asymptote tails
double strip_pv(const Workspace& ws, int r, double x) {
    const std::size_t n = ws.n;
    const auto& f = ws.logd1[r];
    const double fx = ws.logd1_spline[r](x);
    const double fpx = ws.logd1_spline[r].deriv(x);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
        const double s = x - ws.x[j];
        if (std::abs(s) < 1e-9) continue; // subtracted integrand vanishes
        acc += w * (f[j] - fx - fpx * (ws.x[j] - x)) / std::sinh(s);
    }
    acc *= ws.h;
    const double A = x - X_MIN, B = X_MAX - x;
    // PV Int kernel over the domain and Int (y-x) kernel over the domain
    const double i0 = std::log(std::tanh(0.5 * std::max(A, 1e-12)) /
                               std::tanh(0.5 * std::max(B, 1e-12)));
    auto tail_s = [](double T) {
        if (T < 1.0) {
            const double t2 = T * T;
            return PI * PI / 4.0 -
                   T * (1.0 - t2 / 18.0 + 7.0 * t2 * t2 / 1800.0 -
                        31.0 * t2 * t2 * t2 / 105840.0);
        }
        double a = 0.0;
        for (int j = 0; j < 60; ++j) {
            const double m = 2.0 * j + 1.0;
            const double e = std::exp(-m * T);
            if (e < 1e-20) break;
            a += 2.0 * e * (T / m + 1.0 / (m * m));
        }
        return a;
    };
    const double i1 = -(PI * PI / 2.0 - tail_s(A) - tail_s(B));
    acc += fx * i0 + fpx * i1;
    // tails: f ~ const beyond the grid
    acc += -f.front() * std::log(std::tanh(0.5 * std::max(A, 1e-12)));
    acc += f.back() * std::log(std::tanh(0.5 * std::max(B, 1e-12)));
    return acc / (2.0 * PI);
}

double psi_eval(const Workspace& ws, const TBAModel& model, int q, double x) {
    double v = (q == 1) ? 4.0 * std::exp(-x) : 0.0;
    for (int r = 1; r <= ws.S; ++r) {
        if (std::abs(q - r) != 1) continue;
        for (double y : ws.zeros[r - 1]) v += std::atan2(1.0, std::sinh(x - y));
        v -= strip_pv(ws, r - 1, x);
    }
    (void)model;
    return v;
}

// bracket + bisect the level psi^q = pi n, given a decreasing psi
double solve_zero(const Workspace& ws, const TBAModel& model, int q, int n_level,
                  double guess) {
    const double target = PI * double(n_level);
    auto f = [&](double x) { return psi_eval(ws, model, q, x) - target; };
    // bracket around the previous position first, then scan the grid
    double a = guess - 0.5, b = guess + 0.5;
    double fa = f(a), fb = f(b);
    int widen = 0;
    while (fa * fb > 0.0 && widen < 3) {
        a -= 0.5;
        b += 0.5;
        fa = f(a);
        fb = f(b);
        ++widen;
    }
    if (fa * fb > 0.0) {
        const int coarse = 96;
        bool found = false;
        double xa = X_MIN, va = f(xa);
        for (int i = 1; i <= coarse; ++i) {
            const double xb = X_MIN + (X_MAX - X_MIN) * double(i) / coarse;
            const double vb = f(xb);
            if (va * vb <= 0.0) {
                a = xa;
                b = xb;
                fa = va;
                fb = vb;
                found = true;
                break;
            }
            xa = xb;
            va = vb;
        }
        if (!found)
            throw BracketingError("solve_tba: cannot bracket zero with n = " +
                                      std::to_string(n_level) + " in strip " +
                                      std::to_string(q),
                                  "strip " + std::to_string(q));
    }
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if (std::abs(fm) < 1e-12 || 0.5 * (b - a) < 1e-13) return mid;
        if (fa * fm <= 0.0) {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    return 0.5 * (a + b);
}

} // namespace

void StripState::check(const TBAModel& model) const {
    if (int(quantum_numbers.size()) != model.strips())
        throw std::domain_error("StripState: need one quantum-number list per strip");
    for (const auto& qs : quantum_numbers) {
        for (std::size_t k = 0; k < qs.size(); ++k) {
            if (qs[k] < 0)
                throw std::domain_error("StripState: quantum numbers must be >= 0");
            if (k > 0 && qs[k] > qs[k - 1])
                throw std::domain_error(
                    "StripState: quantum numbers must be non-increasing");
        }
    }
}

TBASolution solve_tba(const TBAModel& model, const StripState& state,
                      const IterationConfig& cfg) {
    model.check();
    state.check(model);
    cfg.check();

    const int S = model.strips();
    Workspace ws(S);

    // initial guess: pure driving term, zeros from the strip-1 inversion
    for (int q = 0; q < S; ++q)
        for (std::size_t i = 0; i < ws.n; ++i)
            ws.d[q][i] = q == 0 ? std::exp(-4.0 * std::exp(-ws.x[i])) : 1.0;
    for (int q = 1; q <= S; ++q) {
        const auto& qs = state.quantum_numbers[q - 1];
        ws.zeros[q - 1].resize(qs.size());
        for (std::size_t k = 0; k < qs.size(); ++k) {
            const int nl = state.n_level(q, int(k) + 1);
            ws.zeros[q - 1][k] = -std::log(PI * double(nl) / 4.0);
        }
    }

    const bool boundary = model.boundary_xi.has_value();
    const double xi = boundary ? *model.boundary_xi : 0.0;

    std::vector<double> history;
    double damping = cfg.damping;
    bool done = false;
    int used = 0;

    for (int it = 1; it <= cfg.max_iter && !done; ++it) {
        used = it;
        refresh_log(ws);

        // function sweep
        double res_f = 0.0;
        std::vector<std::vector<double>> nd(S, std::vector<double>(ws.n));
        std::vector<std::vector<double>> conv(S);
        for (int r = 0; r < S; ++r) conv[r] = strip_convolution(ws, r);
        for (int q = 1; q <= S; ++q) {
            for (std::size_t i = 0; i < ws.n; ++i) {
                double lg = q == 1 ? -4.0 * std::exp(-ws.x[i]) : 0.0;
                double factor = 1.0;
                for (int r = 1; r <= S; ++r) {
                    if (std::abs(q - r) != 1) continue;
                    lg += conv[r - 1][i];
                    for (double y : ws.zeros[r - 1])
                        factor *= std::tanh(0.5 * (ws.x[i] - y));
                }
                if (boundary && q == 1) factor *= std::tanh(0.5 * (ws.x[i] + xi));
                const double target = std::exp(lg) * factor;
                const double old = ws.d[q - 1][i];
                res_f = std::max(res_f, std::abs(target - old));
                nd[q - 1][i] = old + damping * (target - old);
            }
        }
        ws.d.swap(nd);

        // zero sweep
        refresh_log(ws);
        double res_z = 0.0;
        for (int q = 1; q <= S; ++q) {
            auto& zq = ws.zeros[q - 1];
            for (std::size_t k = 0; k < zq.size(); ++k) {
                const int nl = state.n_level(q, int(k) + 1);
                const double ynew = solve_zero(ws, model, q, nl, zq[k]);
                res_z = std::max(res_z, std::abs(ynew - zq[k]));
                zq[k] = ynew;
            }
        }

        history.push_back(std::max(res_f, 1e-300));
        done = res_f <= cfg.tol_function && res_z <= cfg.tol_sources;
    }

    if (!done)
        throw DivergenceError("solve_tba: max_iter exceeded", history);

    TBASolution sol;
    sol.d_hat.reserve(S);
    for (int q = 0; q < S; ++q) {
        Grid g(X_MIN, X_MAX, ws.n);
        for (std::size_t i = 0; i < ws.n; ++i) g.values[i] = ws.d[q][i];
        sol.d_hat.push_back(std::move(g));
    }
    sol.zeros = ws.zeros;
    sol.report.iterations_used = used;
    sol.report.final_residual = history.back();
    if (history.size() >= 3)
        sol.report.contraction_estimate = solver::estimate_contraction(history);
    return sol;
}

double scaling_energy(const TBAModel& model, const TBASolution& sol) {
    model.check();
    const Grid& d1 = sol.d_hat.at(0);
    const std::size_t n = d1.n();
    const double h = d1.h();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = std::log1p(d1.values[i].real());
        if (f == 0.0) continue;
        const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        acc += w * f * std::exp(-d1.x(i));
    }
    acc *= h;
    acc += std::log1p(d1.values[n - 1].real()) * std::exp(-d1.x_max); // right tail
    double e = -acc / (PI * PI);
    for (double y : sol.zeros.at(0)) e += 2.0 / PI * std::exp(-y);
    return e;
}

double conformal_energy_closed_form(const TBAModel& model, const StripState& state) {
    model.check();
    state.check(model);
    const int S = model.strips();
    double quad = 0.0;
    for (int q = 1; q <= S; ++q) {
        const double mq = double(state.m(q));
        quad += 2.0 * mq * mq;
        if (q < S) quad -= 2.0 * mq * double(state.m(q + 1));
    }
    return -model.central_charge() / 24.0 + 0.25 * quad +
           double(state.total_quantum_number());
}

double integrals_constant(int n) {
    if (n < 1) throw std::domain_error("integrals_constant: n >= 1");
    double dfact = 1.0;
    for (int k = 10 * n - 7; k >= 1; k -= 2) dfact *= double(k);
    double nfact = 1.0;
    for (int k = 2; k <= n; ++k) nfact *= double(k);
    double mfact = 1.0;
    for (int k = 2; k <= 4 * n - 2; ++k) mfact *= double(k);
    return std::pow(2.0, 2 - n) * std::pow(3.0, 1 - 2 * n) *
           std::pow(5.0, 1 - n) * dfact / (nfact * mfact) * PI;
}

double integrals_of_motion(const TBAModel& model, const TBASolution& sol, int n) {
    model.check();
    if (n < 1) throw std::domain_error("integrals_of_motion: n >= 1");
    const Grid& d1 = sol.d_hat.at(0);
    const int odd = 2 * n - 1;
    if (double(odd) * std::abs(d1.x_min) > 690.0)
        throw std::domain_error(
            "integrals_of_motion: exponent overflows on this grid; extend the "
            "grid toward -inf only as far as the integrand support requires");
    const std::size_t m = d1.n();
    const double h = d1.h();
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double f = std::log1p(d1.values[i].real());
        if (f == 0.0) continue;
        const double w = (i == 0 || i == m - 1) ? 0.5 : 1.0;
        acc += w * f * std::exp(-double(odd) * d1.x(i));
    }
    acc *= h;
    acc += std::log1p(d1.values[m - 1].real()) * std::exp(-double(odd) * d1.x_max) /
           double(odd);
    double v = (n % 2 == 0 ? 1.0 : -1.0) * acc / PI;
    for (double y : sol.zeros.at(0))
        v += 2.0 / double(odd) * std::exp(-double(odd) * y);
    return v / integrals_constant(n);
}

double tba_plateau(int L, int q, int s) {
    if (L < 3) throw std::domain_error("tba_plateau: L >= 3");
    if (q < 1 || q > L - 2) throw std::domain_error("tba_plateau: 1 <= q <= L-2");
    if (s < 1 || s > L) throw std::domain_error("tba_plateau: 1 <= s <= L");
    const double th = double(s) * PI / double(L + 1);
    return std::sin(q * th) * std::sin((q + 2) * th) / (std::sin(th) * std::sin(th));
}

double psi_hat(const TBAModel& model, const TBASolution& sol, int q, double x) {
    model.check();
    if (q < 1 || q > model.strips())
        throw std::domain_error("psi_hat: strip index out of range");
    Workspace ws(model.strips());
    for (int r = 0; r < ws.S; ++r)
        for (std::size_t i = 0; i < ws.n; ++i)
            ws.d[r][i] = sol.d_hat.at(r).values[i].real();
    ws.zeros = sol.zeros;
    refresh_log(ws);
    return psi_eval(ws, model, q, x);
}

} // namespace fss::tba
