#pragma once

#include <Eigen/Dense>

#include <complex>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nlskam {

using Complex = std::complex<double>;

// Parameter vector lambda with strictly positive entries. The default
// sampling box used throughout is [1/2,1]^d.
inline void require_positive(const Eigen::VectorXd& lambda, const char* who) {
    if (lambda.size() < 1) throw std::invalid_argument(std::string(who) + ": empty lambda");
    for (Eigen::Index i = 0; i < lambda.size(); ++i)
        if (!(lambda[i] > 0.0)) throw std::invalid_argument(std::string(who) + ": lambda must be positive");
}

// Coefficients (ascending degree, monic) of
//   P(t) = prod_i (t + l_i) - 2 sum_i l_i prod_{k != i} (t + l_k).
// Templated so tests can run it in exact rational arithmetic.
template <typename T>
std::vector<T> poly_P_coeffs_t(const std::vector<T>& lambda) {
    const std::size_t d = lambda.size();
    if (d == 0) throw std::invalid_argument("poly_P_coeffs: d >= 1 required");
    auto mul_linear = [](std::vector<T> poly, const T& root) {
        // poly *= (t + root)
        std::vector<T> out(poly.size() + 1, T(0));
        for (std::size_t i = 0; i < poly.size(); ++i) {
            out[i + 1] += poly[i];
            out[i] += poly[i] * root;
        }
        return out;
    };
    std::vector<T> full{T(1)};
    for (const auto& l : lambda) full = mul_linear(full, l);

    std::vector<T> correction(d, T(0)); // degree d-1
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<T> prod{T(1)};
        for (std::size_t k = 0; k < d; ++k)
            if (k != i) prod = mul_linear(prod, lambda[k]);
        for (std::size_t j = 0; j < prod.size(); ++j) correction[j] += lambda[i] * prod[j];
    }
    for (std::size_t j = 0; j < correction.size(); ++j) full[j] -= T(2) * correction[j];
    return full;
}

Eigen::VectorXd poly_P_coeffs(const Eigen::VectorXd& lambda);

// M(l): diagonal l_i, off-diagonal 2 sqrt(l_i l_k); its characteristic
// polynomial is P.
Eigen::MatrixXd build_M(const Eigen::VectorXd& lambda);

// N(l_i,l_k) = [[l_i, 2 sqrt(l_i l_k)], [-2 sqrt(l_i l_k), -l_k]]; its
// characteristic polynomial is Q(t) = t^2 - (l_i - l_k) t + 3 l_i l_k.
Eigen::Matrix2d build_N(double li, double lk);

// Ascending real eigenvalues of M, cross-checked against the companion
// matrix roots of P.
Eigen::VectorXd mu_of_lambda(const Eigen::VectorXd& lambda);

// All complex roots of a monic polynomial with ascending coefficients,
// via its companion matrix. Used as an independent oracle.
std::vector<Complex> companion_roots(const Eigen::VectorXd& coeffs_ascending);

// Roots of Q: mu_pm = ((l_i - l_k) -/+ sqrt(l_i^2 + l_k^2 - 14 l_i l_k)) / 2,
// principal branch; .first picks the minus sign.
std::pair<Complex, Complex> mu_pm(double li, double lk);

// Two cone tests for real, distinct mu_pm are in circulation: the sign of
// the radicand itself (ratio roots 7 -/+ 4 sqrt(3)) and the product form
// with c_pm = (5 +/- sqrt(21))/2. They disagree; both are reported so the
// discrepancy stays visible in output.
struct RealityDiagnostics {
    double radicand = 0.0;          // l_i^2 + l_k^2 - 14 l_i l_k
    bool real_distinct = false;     // radicand > 0
    double cpm_cone_value = 0.0;    // (l_k - c+ l_i)(l_k - c- l_i)
    bool cpm_cone_positive = false;
    double radicand_ratio_roots[2] = {0.0, 0.0}; // 7 -/+ 4 sqrt(3)
};

RealityDiagnostics reality_diagnostics(double li, double lk);

struct EigenGap {
    double gap = std::numeric_limits<double>::infinity();
    int complex_pairs_excluded = 0;
};

// Minimum pairwise distance among the mu_i and every real mu_pm pair;
// complex pairs are excluded and counted.
EigenGap eigen_gap(const Eigen::VectorXd& lambda);

struct SpectralData {
    Eigen::VectorXd mu;                                     // ascending
    std::map<std::pair<int, int>, std::pair<Complex, Complex>> mu_pm; // (i,k), i<k
    double gap = std::numeric_limits<double>::infinity();
    bool all_real = true;
};

SpectralData make_spectral_data(const Eigen::VectorXd& lambda);

struct DomainScan {
    std::vector<Eigen::VectorXd> feasible_points;
    bool empty = true;
};

// Grid scan of a box in the positive orthant for points where the mu_i are
// distinct and every mu_pm pair is real and distinct with gap >= gamma_tilde.
DomainScan find_domain_O1(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                          int grid_per_dim, double gamma_tilde = 1e-6);

struct SymplecticBlockMap {
    enum class Type { I, II };
    Type type = Type::I;
    Eigen::MatrixXd U;                 // d x d orthogonal (I) or 2 x 2 Sigma-orthogonal (II)
    Eigen::VectorXd eigenvalues;       // diagonal of U^-1 (block matrix) U, in column order
    Eigen::VectorXd frequencies;       // K + mu_i (I); (K + mu_pos, -(K + mu_neg)) (II)
};

// Type I: orthogonal U with U^T M U diagonal, frequencies K + mu_i ascending.
SymplecticBlockMap diagonalize_block_I(const Eigen::VectorXd& lambda, double K);

// Type II: real U with U^-1 N U diagonal and U^T Sigma U = Sigma,
// Sigma = diag(1,-1). Columns are ordered so the Sigma-positive mode comes
// first; `eigenvalues` reports which root of Q landed in which column.
// Throws when the mu_pm pair is complex or nearly repeated.
SymplecticBlockMap diagonalize_block_II(double li, double lk, double K);

} // namespace nlskam
