#pragma once

#include "nlskam/frequencies.hpp"
#include "nlskam/tuples.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nlskam {

// Weights of a site in the transformed mass and momentum: generic sites
// count (1, m, n), horizontal-line sites (0, 0, n), circle sites
// (0, m - m_i, n) resp. (0, m - m_k, n).
struct SiteWeights {
    std::int64_t mass = 0;
    std::int64_t px = 0;
    std::int64_t py = 0;
};

SiteWeights site_weights(const SupportSet& s0, const Site& j);

// l = 0 and every site's signed multiplicities cancel.
bool is_action_preserving(const AdmissibleTuple& tuple);

// The three exact selection rules for a tuple.
bool satisfies_selection_rules(const SupportSet& s0, const AdmissibleTuple& tuple);

struct EnumBounds {
    std::int64_t ell_max = 2;   // |l|_1 bound
    std::int64_t m_box = 3;     // |m| bound on sites
    std::int64_t n_box = 2;     // |n| bound on sites
};

// All admissible, non action-preserving tuples of the given order inside
// the bounds, one canonical representative per orbit. The last site is
// solved from the selection rules rather than scanned.
std::vector<AdmissibleTuple> enumerate_admissible(const SupportSet& s0, int order, const EnumBounds& bounds);

// Case label in the non-vanishing analysis, determined by the multiset of
// site classes (generic G / line S / circle C).
struct CaseLabel {
    int order = 0;    // 2 or 3
    int index = 0;    // 1..6 for order 2, 1..10 for order 3
    std::string name; // e.g. "GGC"
};

CaseLabel classify_case(const SupportSet& s0, const AdmissibleTuple& tuple);

struct FMinScan {
    double min_abs_F = 0.0;
    AdmissibleTuple argmin_tuple;
    Eigen::VectorXd argmin_lambda;
    bool identically_zero = false; // provable vanishing: no mu term and l = 0
};

// Minimum of |F(lambda)| over a grid on a compact box, over the supplied
// tuples with |l|_1 <= ell_bound; a gamma_1 estimate.
FMinScan f_min_scan(const SupportSet& s0, const std::vector<AdmissibleTuple>& tuples,
                    const Eigen::VectorXd& box_lo, const Eigen::VectorXd& box_hi,
                    int grid_per_dim, std::int64_t ell_bound, double eps);

struct ScanConfig {
    int order = 3;
    double gamma = 0.01;
    double tau = 0.0;      // 0 -> default d+2
    double eps = 1e-3;
    EnumBounds bounds;
    CorrectionBudget budget;
    bool apply_c1_skip = true;
    int workers = 1;
    std::int64_t ell_genericity_L = 0; // documented knob for the l = 0 line-site triples
};

struct Violation {
    AdmissibleTuple tuple;
    double divisor_abs = 0.0;
    double threshold = 0.0;
};

struct ScanReport {
    ScanConfig config;
    std::uint64_t tuples_scanned = 0;
    std::uint64_t skipped_c1 = 0;
    std::uint64_t complex_skipped = 0;
    std::optional<Violation> worst; // smallest divisor lower bound seen
    std::vector<Violation> violations;
    std::map<std::string, std::uint64_t> per_case_counts;
};

// Melnikov condition scan at fixed lambda: a tuple violates when its whole
// corrected divisor interval lies below eps*gamma/<l>^tau (order 3) or
// eps*gamma/2 * N^-tau with N = ell_max (order 2).
ScanReport melnikov_scan(const FrequencyContext& ctx, const ScanConfig& cfg);

struct MeasurePoint {
    double gamma = 0.0;
    double excluded_fraction = 0.0;
    double ci_lo = 0.0, ci_hi = 0.0;
};

struct TupleMeasure {
    AdmissibleTuple tuple;
    double alpha = 0.0;
    double empirical_measure = 0.0; // Lebesgue estimate: fraction * box volume
    double sigma = 0.0;             // binomial std. dev. of the estimate
    double lipschitz_bound = 0.0;   // 16 alpha / |l|_1
};

struct MeasureConfig {
    std::vector<double> gamma_list;
    double tau = 0.0; // 0 -> default d+2
    double eps = 1e-3;
    EnumBounds bounds;
    std::uint64_t nsamples = 10000;
    std::uint64_t seed = 1;
    int workers = 1;
    Eigen::VectorXd box_lo, box_hi; // empty -> [1/2,1]^d
    double per_tuple_alpha = 0.05;
    std::vector<AdmissibleTuple> per_tuple_probes; // optional Lipschitz-bound checks
};

struct MeasureReport {
    MeasureConfig config;
    std::vector<MeasurePoint> points;     // one per gamma, same sample set
    std::vector<TupleMeasure> per_tuple;
    std::uint64_t tuples_used = 0;
    std::uint64_t complex_skipped = 0;
};

// Monte-Carlo estimate of the excluded parameter fraction: the lambda for
// which at least one enumerated tuple violates the order-3 condition.
MeasureReport measure_estimate(const SupportSet& s0, const MeasureConfig& cfg);

} // namespace nlskam
