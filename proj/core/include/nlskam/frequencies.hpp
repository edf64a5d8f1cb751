#pragma once

#include "nlskam/lattice.hpp"
#include "nlskam/spectra.hpp"
#include "nlskam/tuples.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace nlskam {

// Everything needed to evaluate first-order frequencies at one (lambda, eps).
struct FrequencyContext {
    SupportSet s0;
    Eigen::VectorXd lambda;
    double eps = 0.0;
    SpectralData spectral;

    FrequencyContext(SupportSet support, Eigen::VectorXd lam, double eps_)
        : s0(std::move(support)), lambda(std::move(lam)), eps(eps_), spectral(make_spectral_data(lambda)) {
        if (lambda.size() != s0.d())
            throw std::invalid_argument("FrequencyContext: lambda dimension != d");
        if (!(eps >= 0.0)) throw std::invalid_argument("FrequencyContext: eps must be >= 0");
    }
};

// Tangential frequencies omega_i = m_i^2 - eps * l_i.
Eigen::VectorXd omega(const FrequencyContext& ctx);

// First-order actions I_i = eps * l_i.
Eigen::VectorXd actions(const FrequencyContext& ctx);

struct OmegaTilde {
    Complex value;
    bool is_complex = false; // true for hyperbolic circle blocks
};

// First-order normal frequency of a non-tangential site:
//   generic (m,n):        m^2 + n^2
//   line (m,0):           m^2
//   horizontal (m_i, n):  eps mu_i + n^2           (ascending mu convention)
//   circle C+_{ik}:       m^2 + n^2 - m_i^2 + eps mu+_{ik}
//   circle C-_{ik}:       m^2 + n^2 - m_k^2 - eps mu-_{ik}
OmegaTilde omega_tilde(const FrequencyContext& ctx, const Site& j);

// The table hatF(i,k): eps mu_i for k = -1 (no circle partner),
// eps mu+_{ik} for i < k, eps mu-_{ki} for k < i, 0 for i = k.
// Indices are 0-based.
Complex hatF(const FrequencyContext& ctx, int i, int k);

// One first-order term of F: -l.lambda is carried separately.
struct KFTerm {
    enum class Kind { EllLinear, Mu, MuPlus, MuMinus };
    Kind kind = Kind::EllLinear;
    int i = -1, k = -1; // support indices for the mu kinds
    int sign = +1;
};

// Exact split of the order-b divisor at first order:
//   omega(lambda).l + sum_r s_r OmegaTilde_{j_r} = K + eps F(lambda),
// with K the integer part and F a signed sum of -l.lambda and mu terms.
struct DivisorDecomposition {
    std::int64_t K = 0;                // full integer part, omega0.l included
    std::int64_t K_sites = 0;          // integer part of the site terms only
    std::vector<std::int64_t> ell;
    std::vector<KFTerm> terms;
    bool complex_F = false;

    Complex evaluate_F(const FrequencyContext& ctx) const;
};

DivisorDecomposition kf_decompose(const FrequencyContext& ctx, const AdmissibleTuple& tuple);

// Divisor value K + eps F(lambda) for the context's eps.
Complex divisor_value(const FrequencyContext& ctx, const AdmissibleTuple& tuple);

// Interval budget for the uncomputable second-order corrections: each
// first-order frequency is trusted up to M0 eps^2 weighted by the site decay.
struct CorrectionBudget {
    double M0 = 0.0;
};

struct DivisorInterval {
    double lo = 0.0, hi = 0.0;
    Complex center{0.0, 0.0};
    double width = 0.0;
    bool complex_flag = false;

    // smallest |value| attainable in the interval (0 when it straddles 0)
    double abs_lower() const {
        if (lo <= 0.0 && 0.0 <= hi) return 0.0;
        return std::min(std::abs(lo), std::abs(hi));
    }
    // largest |value| attainable in the interval
    double abs_upper() const { return std::max(std::abs(lo), std::abs(hi)); }
};

DivisorInterval corrected_divisor_interval(const FrequencyContext& ctx, const AdmissibleTuple& tuple,
                                           const CorrectionBudget& budget);

} // namespace nlskam
