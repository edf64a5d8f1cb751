#pragma once

#include "nlskam/frequencies.hpp"
#include "nlskam/quadham.hpp"

#include <optional>
#include <unordered_map>
#include <vector>

namespace nlskam {

// Diagonal part omega . Y + sum_j D_j |a_j|^2 on a truncation grid.
struct DiagHam {
    TruncationGrid grid;
    Eigen::VectorXd omega;                           // tangential frequencies
    std::unordered_map<Site, double, SiteHash> freq; // D_j, real

    explicit DiagHam(TruncationGrid g) : grid(std::move(g)) {}

    double at(const Site& j) const { return freq.at(j); }
};

// D with the first-order normal frequencies on every grid site. Throws for
// hyperbolic circle pairs (complex mu_pm); the grid must cover S and C.
DiagHam build_diag_initial(const FrequencyContext& ctx, const TruncationGrid& grid);

struct ZhatBlock {
    SymplecticBlockMap::Type type = SymplecticBlockMap::Type::I;
    std::int64_t n = 0;                  // type I: the y index of the S_n block
    Site site{}, partner{};              // type II: the circle vertex pair
    double K = 0.0;
    Eigen::MatrixXcd flow_matrix;        // K I + eps M (I), K I + eps N (II)
    std::vector<Site> sites;
};

struct FirstOrderHam {
    TruncatedQuadHam H1;     // order-eps quadratic part after the descent step
    TruncatedQuadHam Z1;     // its resonant part
    std::vector<ZhatBlock> blocks;
};

// The explicit order-eps Hamiltonians: H1 from the Q^-/Q^+ kernels with
// their (m1^2-m2^2)^2 and (m1^2+m2^2+2n^2) divisor weights, Z1 the resonant
// coefficients 2 eps sqrt(l_i l_j), and the decoupled block matrices.
FirstOrderHam build_H1_Z1(const SupportSet& s0, const Eigen::VectorXd& lambda, double eps,
                          const TruncationGrid& grid);

class SmallDivisorError : public std::runtime_error {
public:
    SmallDivisorError(QuadKey key, double divisor, double threshold)
        : std::runtime_error("homological equation: small divisor"), key(key), divisor(divisor),
          threshold(threshold) {}
    QuadKey key;
    double divisor = 0.0;
    double threshold = 0.0;
};

struct HomologicalSolution {
    TruncatedQuadHam chi;
    std::vector<std::pair<Site, double>> avg; // theta-average [Q] to absorb into D
};

// Solve {omega.Y + D, chi} = Pi_{<=N}([Q] - Q) keywise. Divisors of
// non-action-preserving keys with |l|_1 <= N must clear eps*gamma/2 * N^-tau,
// otherwise a SmallDivisorError carries the offending key: the mechanism by
// which a lambda is excluded.
HomologicalSolution solve_homological(const DiagHam& D, const TruncatedQuadHam& Q, std::int64_t N,
                                      double gamma, double tau, double eps);

struct KamStepConfig {
    std::int64_t N = 8;
    double gamma = 0.05;
    double tau = 4.0;
    double eps = 1e-3;
    double tol_lie = 1e-14;
    int max_lie_terms = 48;
};

struct KamStepResult {
    DiagHam D_new;
    TruncatedQuadHam Q_new;
    TruncatedQuadHam chi;
    int lie_terms = 0;
    double dropped_mass = 0.0;
};

// One reducibility step: D_new = D + [Q], Q_new the Lie-series remainder of
// the time-1 flow of chi, truncated when terms fall below tol_lie.
KamStepResult kam_step(const DiagHam& D, const TruncatedQuadHam& Q, const KamStepConfig& cfg);

struct KamIterateConfig {
    double s = 1.0;
    double eta0 = 1e-3;     // Q0 is rescaled so its normalized size is exactly eta0
    double gamma = 0.05;
    double tau = 4.0;
    double eps = 1e-3;
    int nu_max = 4;
    double tol_lie = 1e-14;
    bool normalize_q0 = true;
};

struct KamTraceStep {
    int nu = 0;
    double s_nu = 0.0;
    std::int64_t N_nu = 0;
    double eta_target = 0.0; // eta_nu = eta0^{(3/2)^nu}
    double q_norm = 0.0;     // majorant norm of Q_nu at s_nu (2-norm)
    double q_norm_inf = 0.0; // row-sum norm of the same matrix, cross-validation
    double freq_drift = 0.0; // majorant norm of the diagonal increment
    bool target_met = false; // q_norm <= gamma^2 eps eta_nu
    bool excluded = false;
    int lie_terms = 0;
    double dropped_mass = 0.0;
};

struct KamTrace {
    std::vector<KamTraceStep> steps;
    bool excluded = false;
    std::optional<SmallDivisorError> exclusion;
    int first_target_failure = -1;
    double total_drift = 0.0;
};

// Iterate kam_step with s_nu = s_{nu-1} - c* s / nu^2 (2 c* sum 1/nu^2 = 1),
// eta_nu = eta0^{(3/2)^nu}, N_nu = (s_nu - s_{nu+1})^-1 log(1/eta_nu).
KamTrace kam_iterate(const DiagHam& D0, const TruncatedQuadHam& Q0, const KamIterateConfig& cfg);

} // namespace nlskam
