#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "fss/quadrature.hpp"
#include "fss/types.hpp"

namespace fss::kernels {

/// Fourier transform of the NLIE kernel,
///   ghat(k) = sinh(pi (p-1) k / 2) / (2 sinh(pi p k / 2) cosh(pi k / 2)),
/// even in k, ghat(0) = (p-1)/(2p), decays like exp(-pi min(1,p)|k|).
double ghat(double k, double p);

/// NLIE kernel G(theta) = (1/2pi) Int dk e^{ik theta} ghat(k) for real theta.
double kernel_g(double theta, double p);

/// G at complex argument; |Im theta| < pi min(1,p) required.
cplx kernel_g(cplx theta, double p);

/// chi(theta) = 2 pi Int_0^theta G, odd, plateau pi(p-1)/(2p) at +inf.
double chi(double theta, double p);

/// chi at complex argument inside the first determination strip
/// |Im theta| < pi min(1,p).
cplx chi(cplx theta, double p);

/// Analytic continuation of chi to the full plane (odd principal
/// determination; purely imaginary arguments above the first branch point
/// take the symmetric two-sided average).
cplx chi_continued(cplx theta, double p);

/// Second determination of chi, defined for
/// pi min(1,p) < |Im theta| <= pi (p+1)/2:
///   p > 1:  chi(theta) + chi(theta - i pi sign(Im theta))
///   p < 1:  chi(theta) - chi(theta - i p pi sign(Im theta))
cplx chi_II(cplx theta, double p);

/// phi_nu(theta) = i log[ sinh((i pi nu + theta)/(p+1)) /
///                        sinh((i pi nu - theta)/(p+1)) ],
/// odd determination, analytic for |Im theta| < pi min(nu, p+1-nu).
cplx phi_nu(cplx theta, double nu, double p);

struct ConvolveDiagnostics {
    bool decay_warning = false;
};

/// g(x) = Int dy f(y) / (2 pi cosh(x - y - shift)), trapezoid on the grid.
Grid cosh_convolve(const Grid& f, double shift,
                   ConvolveDiagnostics* diag = nullptr);

/// Principal-value convolution g(x_i) = PV Int dy f(y) / (2 pi sinh(x_i - y))
/// over the grid domain; the singular node is handled by local odd-part
/// subtraction.
Grid pv_sinh_convolve(const Grid& f, ConvolveDiagnostics* diag = nullptr);

/// Bessel J_n for n in {0, 1} via the trapezoid form of the integral
/// representation; absolute error well below 1e-13.
double bessel_j(int n, double z);

/// Dense chi table with spline interpolation, built once per coupling.
/// Covers |theta| <= range; beyond that the exact plateau is used
/// (the remainder is below 1e-15 for range >= 45 / (pi min(1,p))).
class ChiTable {
  public:
    ChiTable() = default;
    ChiTable(double p, double range);
    double operator()(double theta) const;
    double deriv(double theta) const;
    double p() const { return p_; }
    double plateau() const { return plateau_; }

  private:
    double p_ = 0.0, range_ = 0.0, plateau_ = 0.0;
    Spline tab_;
};

/// chi sampled along a horizontal line Im(theta) = offset, Re on a uniform
/// grid, with spline interpolation of real and imaginary parts.
/// Uses the in-strip Fourier representation when the line is inside the
/// first determination strip and the series continuation otherwise.
class ChiLine {
  public:
    ChiLine() = default;
    ChiLine(double p, double offset, double re_max, std::size_t n);
    cplx operator()(double re) const;
    double offset() const { return offset_; }

  private:
    double p_ = 0.0, offset_ = 0.0;
    Spline re_, im_;
};

/// One row of kernel values G(j h + i c), j = -(n-1) .. n-1, for discrete
/// convolutions against functions sampled with spacing h.
std::vector<cplx> g_kernel_row(double p, double offset, double h, std::size_t n);

} // namespace fss::kernels
