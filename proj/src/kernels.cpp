#include "fss/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace fss::kernels {

namespace {

double strip_halfwidth(double p) { return PI * std::min(1.0, p); }

void require_p(double p) {
    if (!(p > 0.0) || !std::isfinite(p))
        throw std::domain_error("kernel: coupling p must be positive and finite");
}

// Panel width so that 16-point Gauss resolves both the oscillation
// exp(i k theta) and the exponential decay of the transform.
double panel_width(double theta_scale) {
    return std::min(2.0, 8.0 / (1.0 + std::abs(theta_scale)));
}

// Integration cutoff: |ghat| < 1e-19 once pi min(1,p) k > 43.
double k_cutoff(double p, double margin_reduction = 0.0) {
    const double rate = strip_halfwidth(p) - margin_reduction;
    if (rate <= 1e-3)
        throw std::domain_error("kernel: argument too close to the analyticity boundary");
    return 43.0 / rate;
}

// log Gamma with argument shifted into the Lanczos domain.
cplx lgamma_any(cplx z) {
    cplx corr = 0.0;
    int guard = 0;
    while (z.real() < 1.0) {
        corr += std::log(z);
        z += 1.0;
        if (++guard > 4096)
            throw std::domain_error("lgamma_any: argument too far left");
    }
    return log_gamma(z) - corr;
}

// F(x) = log Gamma((x+1)/2) - log Gamma(x/2); alternating-m resummation of
// sum_m (-1)^m log(m + x).
cplx series_f(cplx x) { return lgamma_any(0.5 * (x + 1.0)) - lgamma_any(0.5 * x); }

// Per-level term of the continuation series for chi (n treated as continuous
// for the Euler-Maclaurin tail):
//   g(n) = -i [F(c1+i tt) - F(c1-i tt) - F(c2+i tt) + F(c2-i tt)],
//   c1 = 1 + p n,  c2 = p (1 + n),  tt = theta / pi.
cplx series_term(double n, double p, cplx tt) {
    const cplx i(0.0, 1.0);
    const double c1 = 1.0 + p * n;
    const double c2 = p * (1.0 + n);
    const cplx a = series_f(c1 + i * tt) - series_f(c1 - i * tt);
    const cplx b = series_f(c2 + i * tt) - series_f(c2 - i * tt);
    return -i * (a - b);
}

// Large-c form of -i [F(c+i tt) - F(c-i tt)]; the exact log-gamma difference
// cancels catastrophically there. Error O(c^-7).
cplx series_h_asym(double c, cplx tt) {
    const cplx i(0.0, 1.0);
    const cplx u = c + i * tt, v = c - i * tt;
    const cplx u3 = u * u * u, v3 = v * v * v;
    const cplx first = std::log(u / v) / (2.0 * i);
    const cplx second = tt / (2.0 * u * v);
    const cplx third = (1.0 / u3 - 1.0 / v3) / (24.0 * i);
    const cplx fourth = -(1.0 / (u3 * u * u) - 1.0 / (v3 * v * v)) / (20.0 * i);
    return first + second + third + fourth;
}

cplx series_term_asym(double n, double p, cplx tt) {
    return series_h_asym(1.0 + p * n, tt) - series_h_asym(p * (1.0 + n), tt);
}

cplx chi_series(cplx theta, double p) {
    if (p == 1.0) return 0.0;
    const cplx tt = theta / PI;
    const int N = 800;
    // exact log-gamma differences cancel badly once the level is large;
    // beyond n_sw the asymptotic term is the more accurate of the two
    const int n_sw =
        std::min(N, int(std::ceil(std::max(80.0, 2.0 * std::abs(tt)) / p)) + 1);
    cplx acc = 0.0;
    for (int n = 0; n < n_sw; ++n) acc += series_term(double(n), p, tt);
    for (int n = n_sw; n < N; ++n) acc += series_term_asym(double(n), p, tt);
    // Euler-Maclaurin tail: midpoint integral plus curvature correction.
    const double T = double(N) - 0.5;
    auto g = [&](double t) { return series_term_asym(t, p, tt); };
    // substitute t = T/s to map [T, inf) to (0, 1]
    cplx tail = gl16_panels([&](double s) { return g(T / s) * (T / (s * s)); },
                            1e-12, 1.0, 0.25);
    tail += (g(T + 0.5) - g(T - 0.5)) / 24.0;
    return acc + tail;
}

} // namespace

double ghat(double k, double p) {
    require_p(p);
    const double a = std::abs(k);
    if (a == 0.0) return (p - 1.0) / (2.0 * p);
    if (PI * a > 700.0) return 0.0;
    const double num = std::exp(-PI * a) * (-std::expm1(-PI * (p - 1.0) * a));
    const double den = (1.0 + std::exp(-PI * a)) * (-std::expm1(-PI * p * a));
    return num / den;
}

double kernel_g(double theta, double p) {
    require_p(p);
    if (!std::isfinite(theta)) throw std::domain_error("kernel_g: non-finite argument");
    if (p == 1.0) return 0.0;
    const double K = k_cutoff(p);
    const double w = panel_width(theta);
    const double v = gl16_panels(
        [&](double k) { return ghat(k, p) * std::cos(k * theta); }, 0.0, K, w);
    return v / PI;
}

cplx kernel_g(cplx theta, double p) {
    require_p(p);
    if (!std::isfinite(theta.real()) || !std::isfinite(theta.imag()))
        throw std::domain_error("kernel_g: non-finite argument");
    if (p == 1.0) return 0.0;
    const double c = std::abs(theta.imag());
    if (c >= strip_halfwidth(p))
        throw std::domain_error("kernel_g: |Im theta| must stay below pi min(1,p)");
    const double K = k_cutoff(p, c);
    const double w = panel_width(theta.real());
    const cplx v = gl16_panels(
        [&](double k) { return ghat(k, p) * std::cos(k * theta); }, 0.0, K, w);
    return v / PI;
}

double chi(double theta, double p) {
    require_p(p);
    if (!std::isfinite(theta)) throw std::domain_error("chi: non-finite argument");
    if (p == 1.0) return 0.0;
    const double K = k_cutoff(p);
    const double w = panel_width(theta);
    return gl16_panels(
        [&](double k) { return 2.0 * ghat(k, p) * std::sin(k * theta) / k; }, 0.0,
        K, w);
}

cplx chi(cplx theta, double p) {
    require_p(p);
    if (p == 1.0) return 0.0;
    const double c = std::abs(theta.imag());
    const double half = strip_halfwidth(p);
    if (c >= half)
        throw std::domain_error(
            "chi: argument outside the first determination strip; use "
            "chi_continued or chi_II");
    if (c > 0.85 * half) return chi_series(theta, p);
    const double K = k_cutoff(p, c);
    const double w = panel_width(theta.real());
    return gl16_panels(
        [&](double k) { return 2.0 * ghat(k, p) * std::sin(k * theta) / k; }, 0.0,
        K, w);
}

cplx chi_continued(cplx theta, double p) {
    require_p(p);
    if (p == 1.0) return 0.0;
    const double half = strip_halfwidth(p);
    if (std::abs(theta.real()) < 1e-12 && std::abs(theta.imag()) >= half) {
        // on the cut: symmetric two-sided average, purely imaginary by oddness
        const double d = 1e-7;
        const cplx left = chi_series(theta - d, p);
        const cplx right = chi_series(theta + d, p);
        return cplx(0.0, 0.5 * (left.imag() + right.imag()));
    }
    return chi_series(theta, p);
}

cplx chi_II(cplx theta, double p) {
    require_p(p);
    const double half = strip_halfwidth(p);
    const double c = std::abs(theta.imag());
    if (!(c > half))
        throw std::domain_error(
            "chi_II: |Im theta| must exceed pi min(1,p); inside the first "
            "determination use chi");
    const double s = theta.imag() > 0.0 ? 1.0 : -1.0;
    if (p >= 1.0)
        return chi_continued(theta, p) + chi_continued(theta - cplx(0.0, s * PI), p);
    return chi_continued(theta, p) - chi_continued(theta - cplx(0.0, s * p * PI), p);
}

cplx phi_nu(cplx theta, double nu, double p) {
    require_p(p);
    if (!(nu > 0.0)) throw std::domain_error("phi_nu: nu must be positive");
    const double lim = PI * std::min(nu, (p + 1.0) - nu);
    if (!(std::abs(theta.imag()) < lim))
        throw std::domain_error("phi_nu: argument outside the analyticity strip");
    const cplx i(0.0, 1.0);
    const cplx w = std::sinh((i * (PI * nu) + theta) / (p + 1.0));
    const cplx v = std::sinh((i * (PI * nu) - theta) / (p + 1.0));
    if (std::abs(w) < 1e-14 || std::abs(v) < 1e-14)
        throw std::domain_error("phi_nu: argument at a branch point");
    return i * (std::log(w) - std::log(v));
}

Grid cosh_convolve(const Grid& f, double shift, ConvolveDiagnostics* diag) {
    const std::size_t n = f.n();
    const double h = f.h();
    double fmax = 0.0;
    for (const auto& v : f.values) fmax = std::max(fmax, std::abs(v));
    const double edge = std::max(std::abs(f.values.front()), std::abs(f.values.back()));
    if (diag) diag->decay_warning = fmax > 0.0 && edge > 1e-8 * fmax;

    // kernel at lag d*h - shift, d = -(n-1) .. n-1
    std::vector<double> row(2 * n - 1);
    for (std::size_t j = 0; j < row.size(); ++j) {
        const double s = (double(j) - double(n - 1)) * h - shift;
        row[j] = 1.0 / (2.0 * PI * std::cosh(s));
    }
    Grid g(f.x_min, f.x_max, n);
    for (std::size_t i = 0; i < n; ++i) {
        cplx acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double wj = (j == 0 || j == n - 1) ? 0.5 * h : h;
            acc += wj * f.values[j] * row[i - j + (n - 1)];
        }
        g.values[i] = acc;
    }
    return g;
}

namespace {

// Int_T^inf s / sinh s ds
double tail_s_over_sinh(double T) {
    if (T <= 0.0) return PI * PI / 4.0;
    if (T < 1.0) {
        // pi^2/4 - Int_0^T (series of s/sinh s)
        const double t2 = T * T;
        const double head = T * (1.0 - t2 / 18.0 + 7.0 * t2 * t2 / 1800.0 -
                                 31.0 * t2 * t2 * t2 / 105840.0);
        return PI * PI / 4.0 - head;
    }
    double acc = 0.0;
    for (int j = 0; j < 60; ++j) {
        const double m = 2.0 * j + 1.0;
        const double e = std::exp(-m * T);
        if (e < 1e-20) break;
        acc += 2.0 * e * (T / m + 1.0 / (m * m));
    }
    return acc;
}

} // namespace

Grid pv_sinh_convolve(const Grid& f, ConvolveDiagnostics* diag) {
    const std::size_t n = f.n();
    const double h = f.h();
    double fmax = 0.0;
    for (const auto& v : f.values) fmax = std::max(fmax, std::abs(v));
    const double edge = std::max(std::abs(f.values.front()), std::abs(f.values.back()));
    if (diag) diag->decay_warning = fmax > 0.0 && edge > 1e-8 * fmax;

    // derivative by 4th-order differences (lower order at the edges)
    std::vector<cplx> fp(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= 2 && i + 2 < n) {
            fp[i] = (f.values[i - 2] - 8.0 * f.values[i - 1] + 8.0 * f.values[i + 1] -
                     f.values[i + 2]) /
                    (12.0 * h);
        } else if (i >= 1 && i + 1 < n) {
            fp[i] = (f.values[i + 1] - f.values[i - 1]) / (2.0 * h);
        } else if (i == 0) {
            fp[i] = (f.values[1] - f.values[0]) / h;
        } else {
            fp[i] = (f.values[n - 1] - f.values[n - 2]) / h;
        }
    }

    std::vector<double> inv_sinh(2 * n - 1, 0.0);
    for (std::size_t j = 0; j < inv_sinh.size(); ++j) {
        const double s = (double(j) - double(n - 1)) * h;
        if (j != n - 1) inv_sinh[j] = 1.0 / std::sinh(s);
    }

    Grid g(f.x_min, f.x_max, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = f.x(i);
        cplx acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue; // subtracted integrand vanishes there
            const double wj = (j == 0 || j == n - 1) ? 0.5 * h : h;
            const double yj = f.x(j);
            acc += wj * (f.values[j] - f.values[i] - fp[i] * (yj - xi)) *
                   inv_sinh[i - j + (n - 1)];
        }
        // analytic pieces: f_i PV Int k + f'_i Int (y-x) k over the domain
        double A = xi - f.x_min, B = f.x_max - xi;
        A = std::max(A, 0.5 * h);
        B = std::max(B, 0.5 * h);
        const double i0 = std::log(std::tanh(0.5 * A) / std::tanh(0.5 * B));
        const double i1 =
            -(PI * PI / 2.0 - tail_s_over_sinh(A) - tail_s_over_sinh(B));
        g.values[i] = (acc + f.values[i] * i0 + fp[i] * i1) / (2.0 * PI);
    }
    return g;
}

double bessel_j(int n, double z) {
    if (n != 0 && n != 1) throw std::domain_error("bessel_j: order must be 0 or 1");
    const int m = std::max(24, int(std::abs(z)) + 28);
    const double h = PI / m;
    double acc = 0.0;
    for (int j = 0; j <= m; ++j) {
        const double t = j * h;
        const double s = std::sin(t);
        const double val = n == 0 ? std::cos(z * s) : std::sin(z * s) * s;
        acc += (j == 0 || j == m) ? 0.5 * val : val;
    }
    return acc * h / PI;
}

ChiTable::ChiTable(double p, double range) : p_(p), range_(range) {
    require_p(p);
    plateau_ = PI * (p - 1.0) / (2.0 * p);
    const double h = 0.005;
    const std::size_t n = std::size_t(range_ / h) + 2;
    range_ = h * double(n - 1);
    std::vector<double> y(n);
    if (p == 1.0) {
        y.assign(n, 0.0);
    } else {
        // shared k-nodes for all table entries
        const double K = k_cutoff(p);
        const double w = panel_width(range_);
        const int m = std::max(1, int(std::ceil(K / w)));
        const double dw = K / m;
        std::vector<double> kn, kw;
        kn.reserve(16 * m);
        kw.reserve(16 * m);
        for (int j = 0; j < m; ++j) {
            const double c = (j + 0.5) * dw, r = 0.5 * dw;
            for (int q = 0; q < 8; ++q) {
                kn.push_back(c + r * GL16_X[q]);
                kn.push_back(c - r * GL16_X[q]);
                kw.push_back(r * GL16_W[q]);
                kw.push_back(r * GL16_W[q]);
            }
        }
        std::vector<double> wg(kn.size());
        for (std::size_t j = 0; j < kn.size(); ++j)
            wg[j] = kw[j] * 2.0 * ghat(kn[j], p) / kn[j];
        for (std::size_t i = 0; i < n; ++i) {
            const double th = h * double(i);
            double acc = 0.0;
            for (std::size_t j = 0; j < kn.size(); ++j)
                acc += wg[j] * std::sin(kn[j] * th);
            y[i] = acc;
        }
    }
    tab_.build(0.0, h, std::move(y));
}

double ChiTable::operator()(double theta) const {
    const double a = std::abs(theta);
    const double v = a >= range_ ? plateau_ : tab_(a);
    return theta >= 0.0 ? v : -v;
}

double ChiTable::deriv(double theta) const {
    const double a = std::abs(theta);
    return a >= range_ ? 0.0 : tab_.deriv(a);
}

ChiLine::ChiLine(double p, double offset, double re_max, std::size_t n)
    : p_(p), offset_(offset) {
    require_p(p);
    const double half = strip_halfwidth(p);
    const double h = 2.0 * re_max / double(n - 1);
    std::vector<double> re(n), im(n);
    if (p == 1.0) {
        re.assign(n, 0.0);
        im.assign(n, 0.0);
    } else if (std::abs(offset) < 0.85 * half) {
        const double K = k_cutoff(p, std::abs(offset));
        const double w = panel_width(re_max);
        const int m = std::max(1, int(std::ceil(K / w)));
        const double dw = K / m;
        std::vector<double> kn, kw;
        for (int j = 0; j < m; ++j) {
            const double c = (j + 0.5) * dw, r = 0.5 * dw;
            for (int q = 0; q < 8; ++q) {
                kn.push_back(c + r * GL16_X[q]);
                kn.push_back(c - r * GL16_X[q]);
                kw.push_back(r * GL16_W[q]);
                kw.push_back(r * GL16_W[q]);
            }
        }
        std::vector<double> wg(kn.size()), ch(kn.size()), sh(kn.size());
        for (std::size_t j = 0; j < kn.size(); ++j) {
            wg[j] = kw[j] * 2.0 * ghat(kn[j], p) / kn[j];
            ch[j] = std::cosh(kn[j] * offset);
            sh[j] = std::sinh(kn[j] * offset);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double x = -re_max + h * double(i);
            double ar = 0.0, ai = 0.0;
            for (std::size_t j = 0; j < kn.size(); ++j) {
                const double s = std::sin(kn[j] * x), c = std::cos(kn[j] * x);
                ar += wg[j] * s * ch[j];
                ai += wg[j] * c * sh[j];
            }
            re[i] = ar;
            im[i] = ai;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double x = -re_max + h * double(i);
            const cplx v = chi_continued(cplx(x, offset), p);
            re[i] = v.real();
            im[i] = v.imag();
        }
    }
    re_.build(-re_max, h, std::move(re));
    im_.build(-re_max, h, std::move(im));
}

cplx ChiLine::operator()(double re) const { return cplx(re_(re), im_(re)); }

std::vector<cplx> g_kernel_row(double p, double offset, double h, std::size_t n) {
    require_p(p);
    std::vector<cplx> row(2 * n - 1, cplx(0.0));
    if (p == 1.0) return row;
    const double c = std::abs(offset);
    const double K = k_cutoff(p, c);
    const double smax = double(n - 1) * h;
    const double w = panel_width(smax);
    const int m = std::max(1, int(std::ceil(K / w)));
    const double dw = K / m;
    std::vector<double> kn, kw;
    for (int j = 0; j < m; ++j) {
        const double cc = (j + 0.5) * dw, r = 0.5 * dw;
        for (int q = 0; q < 8; ++q) {
            kn.push_back(cc + r * GL16_X[q]);
            kn.push_back(cc - r * GL16_X[q]);
            kw.push_back(r * GL16_W[q]);
            kw.push_back(r * GL16_W[q]);
        }
    }
    std::vector<double> wg(kn.size()), ch(kn.size()), sh(kn.size());
    for (std::size_t j = 0; j < kn.size(); ++j) {
        wg[j] = kw[j] * ghat(kn[j], p) / PI;
        ch[j] = std::cosh(kn[j] * offset);
        sh[j] = std::sinh(kn[j] * offset);
    }
    // G(s + i c) = (1/pi) Int ghat [cos(ks) cosh(kc) - i sin(ks) sinh(kc)] dk
    for (std::size_t d = 0; d < n; ++d) {
        const double s = double(d) * h;
        double ar = 0.0, ai = 0.0;
        for (std::size_t j = 0; j < kn.size(); ++j) {
            ar += wg[j] * std::cos(kn[j] * s) * ch[j];
            ai -= wg[j] * std::sin(kn[j] * s) * sh[j];
        }
        row[(n - 1) + d] = cplx(ar, ai);
        row[(n - 1) - d] = std::conj(cplx(ar, ai)); // G(-s+ic) = conj G(s+ic)
    }
    return row;
}

} // namespace fss::kernels
