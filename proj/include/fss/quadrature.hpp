#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fss/types.hpp"

namespace fss {

// 16-point Gauss-Legendre rule on [-1, 1].
inline constexpr double GL16_X[8] = {
    0.09501250983763744018531934, 0.28160355077925891323046050,
    0.45801677765722738634241944, 0.61787624440264374844667176,
    0.75540440835500303389510119, 0.86563120238783174388046790,
    0.94457502307323257607798842, 0.98940093499164993259615417};
inline constexpr double GL16_W[8] = {
    0.18945061045506849628539672, 0.18260341504492358886676366,
    0.16915651939500253818931208, 0.14959598881657673208150173,
    0.12462897125553387205247628, 0.09515851168249278480992510,
    0.06225352393864789286284384, 0.02715245941175409485178057};

/// Integrate f over [a, b] with one 16-point Gauss-Legendre panel.
template <typename F>
auto gl16(F&& f, double a, double b) {
    const double c = 0.5 * (a + b), r = 0.5 * (b - a);
    using R = decltype(f(c));
    R acc{};
    for (int i = 0; i < 8; ++i) {
        acc += R(GL16_W[i]) * (f(c + r * GL16_X[i]) + f(c - r * GL16_X[i]));
    }
    return R(r) * acc;
}

/// Composite Gauss-Legendre over [a, b] with panels of width <= w.
template <typename F>
auto gl16_panels(F&& f, double a, double b, double w) {
    const int m = std::max(1, int(std::ceil((b - a) / w)));
    const double dw = (b - a) / m;
    using R = decltype(f(a));
    R acc{};
    for (int j = 0; j < m; ++j) acc += gl16(f, a + j * dw, a + (j + 1) * dw);
    return acc;
}

/// Natural cubic spline on a uniform grid.
class Spline {
  public:
    Spline() = default;
    Spline(double x0, double h, std::vector<double> y) { build(x0, h, std::move(y)); }

    void build(double x0, double h, std::vector<double> y) {
        if (y.size() < 3) throw std::domain_error("Spline: need >= 3 points");
        x0_ = x0;
        h_ = h;
        y_ = std::move(y);
        const std::size_t n = y_.size();
        m_.assign(n, 0.0);
        // second derivatives from the tridiagonal system (natural ends)
        std::vector<double> c(n, 0.0), d(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double rhs = 6.0 * (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]) / (h_ * h_);
            const double denom = 4.0 - c[i - 1];
            c[i] = 1.0 / denom;
            d[i] = (rhs - d[i - 1]) / denom;
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            m_[i] = d[i] - c[i] * m_[i + 1];
            if (i == 1) break;
        }
    }

    double x_min() const { return x0_; }
    double x_max() const { return x0_ + h_ * double(y_.size() - 1); }

    double operator()(double x) const {
        const std::size_t n = y_.size();
        double t = (x - x0_) / h_;
        std::size_t i = t <= 0.0 ? 0 : std::min(n - 2, std::size_t(t));
        const double a = x0_ + h_ * double(i);
        const double u = (x - a) / h_, v = 1.0 - u;
        return v * y_[i] + u * y_[i + 1] +
               h_ * h_ / 6.0 *
                   ((v * v * v - v) * m_[i] + (u * u * u - u) * m_[i + 1]);
    }

    double deriv(double x) const {
        const std::size_t n = y_.size();
        double t = (x - x0_) / h_;
        std::size_t i = t <= 0.0 ? 0 : std::min(n - 2, std::size_t(t));
        const double a = x0_ + h_ * double(i);
        const double u = (x - a) / h_, v = 1.0 - u;
        return (y_[i + 1] - y_[i]) / h_ +
               h_ / 6.0 * ((3.0 * u * u - 1.0) * m_[i + 1] - (3.0 * v * v - 1.0) * m_[i]);
    }

  private:
    double x0_ = 0.0, h_ = 1.0;
    std::vector<double> y_, m_;
};

/// log Gamma for Re z > 0 (Lanczos, g = 607/128, ~1e-14 relative).
inline cplx log_gamma(cplx z) {
    static const double g = 607.0 / 128.0;
    static const double c[15] = {
        0.99999999999999709182,     57.156235665862923517,
        -59.597960355475491248,     14.136097974741747174,
        -0.49191381609762019978,    3.3994649984811888699e-5,
        4.6523628927048575665e-5,   -9.8374475304879564677e-5,
        1.5808870322491248884e-4,   -2.1026444172410488319e-4,
        2.1743961811521264320e-4,   -1.6431810653676389022e-4,
        8.4418223983852743293e-5,   -2.6190838401581408670e-5,
        3.6899182659531622704e-6};
    if (z.real() < 0.5)
        throw std::domain_error("log_gamma: Re z >= 0.5 required here");
    cplx s = c[0];
    for (int k = 1; k < 15; ++k) s += c[k] / (z + cplx(k - 1));
    const cplx t = z + g - 0.5;
    return 0.5 * std::log(2.0 * PI) + (z - 0.5) * std::log(t) - t + std::log(s);
}

/// digamma for Re z > 0 (derivative of the Lanczos form).
inline cplx digamma(cplx z) {
    static const double g = 607.0 / 128.0;
    static const double c[15] = {
        0.99999999999999709182,     57.156235665862923517,
        -59.597960355475491248,     14.136097974741747174,
        -0.49191381609762019978,    3.3994649984811888699e-5,
        4.6523628927048575665e-5,   -9.8374475304879564677e-5,
        1.5808870322491248884e-4,   -2.1026444172410488319e-4,
        2.1743961811521264320e-4,   -1.6431810653676389022e-4,
        8.4418223983852743293e-5,   -2.6190838401581408670e-5,
        3.6899182659531622704e-6};
    if (z.real() < 0.5)
        throw std::domain_error("digamma: Re z >= 0.5 required here");
    cplx s = c[0], sp = 0.0;
    for (int k = 1; k < 15; ++k) {
        const cplx d = z + cplx(k - 1);
        s += c[k] / d;
        sp -= c[k] / (d * d);
    }
    const cplx t = z + g - 0.5;
    return std::log(t) + (z - 0.5) / t - 1.0 + sp / s;
}

/// Median of a vector (by copy).
inline double median(std::vector<double> v) {
    if (v.empty()) throw std::domain_error("median of empty set");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace fss
