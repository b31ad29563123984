#pragma once

#include <optional>
#include <vector>

#include "fss/types.hpp"

namespace fss::tba {

/// A_L model: strips q = 1 .. L-2 coupled through the Dynkin adjacency
/// A_{q,r} = delta_{q,r-1} + delta_{q,r+1}; optional boundary flow term
/// g_1 = tanh((x+xi)/2), g_q = 1 otherwise.
struct TBAModel {
    int L = 4;
    std::optional<double> boundary_xi;

    int strips() const { return L - 2; }
    double central_charge() const { return 1.0 - 6.0 / (double(L) * (L + 1.0)); }
    void check() const {
        if (L < 3) throw std::domain_error("TBAModel: L >= 3 required");
    }
};

/// Per-strip string content: non-negative quantum numbers sorted
/// I_1 >= I_2 >= ... >= I_{m_q} >= 0; the derived odd levels are
/// n_k = 1 + 2 (I_k + m_q - k), strictly decreasing in k.
struct StripState {
    std::vector<std::vector<int>> quantum_numbers;

    static StripState vacuum(const TBAModel& model) {
        StripState s;
        s.quantum_numbers.assign(model.strips(), {});
        return s;
    }

    int m(int q) const { return int(quantum_numbers.at(q - 1).size()); }
    int n_level(int q, int k) const { // 1-based strip and zero index
        const auto& qs = quantum_numbers.at(q - 1);
        return 1 + 2 * (qs.at(k - 1) + int(qs.size()) - k);
    }
    int total_quantum_number() const {
        int s = 0;
        for (const auto& qs : quantum_numbers)
            for (int i : qs) s += i;
        return s;
    }
    void check(const TBAModel& model) const;
};

struct TBASolution {
    std::vector<Grid> d_hat;                 // real values of d^q on the x line
    std::vector<std::vector<double>> zeros;  // aligned with the quantum numbers
    ConvergenceReport report;
};

/// Solve the coupled strip equations together with the zero quantization
/// conditions. Throws BreakdownError if 1 + d^q loses positivity and
/// BracketingError if a zero cannot be located.
TBASolution solve_tba(const TBAModel& model, const StripState& state,
                      const IterationConfig& cfg);

/// E = -(1/pi^2) Int e^-y log(1+d^1) dy + (2/pi) sum_k exp(-y_k^(1)).
double scaling_energy(const TBAModel& model, const TBASolution& sol);

/// E = -c_L/24 + (1/4) m^T C m + sum I, with C the Cartan matrix of A_{L-2}.
double conformal_energy_closed_form(const TBAModel& model, const StripState& state);

/// I_{2n-1} from the zero positions and the strip-1 integral; n = 1 gives
/// the scaling energy.
double integrals_of_motion(const TBAModel& model, const TBASolution& sol, int n);

/// Normalization constant C_n of the higher integrals (C_1 = pi).
double integrals_constant(int n);

/// Stationary solution value sin(q th) sin((q+2) th) / sin^2 th,
/// th = s pi / (L+1).
double tba_plateau(int L, int q, int s);

/// Quantization function Psi^q(x) for the current solution.
double psi_hat(const TBAModel& model, const TBASolution& sol, int q, double x);

} // namespace fss::tba
