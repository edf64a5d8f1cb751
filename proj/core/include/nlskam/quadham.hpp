#pragma once

#include "nlskam/lattice.hpp"
#include "nlskam/spectra.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace nlskam {

// Finite truncation of the lattice Z^2 minus the tangential sites, the
// theta-Fourier indices |l|_1 <= Lmax, and the h^p weight exponent.
struct TruncationGrid {
    SupportSet s0;
    int Mx = 4;
    int Ny = 2;
    int Lmax = 4;
    double p = 2.0;

    TruncationGrid(SupportSet support, int mx, int ny, int lmax, double p_exp = 2.0)
        : s0(std::move(support)), Mx(mx), Ny(ny), Lmax(lmax), p(p_exp) {
        if (Mx < 1 || Ny < 0 || Lmax < 0 || !(p > 1.0))
            throw std::invalid_argument("TruncationGrid: need Mx >= 1, Ny >= 0, Lmax >= 0, p > 1");
        if (s0.d() > 8) throw std::invalid_argument("TruncationGrid: d <= 8 supported");
        for (std::int64_t m = -Mx; m <= Mx; ++m)
            for (std::int64_t n = -Ny; n <= Ny; ++n) {
                const Site j{m, n};
                if (s0.is_tangential(j)) continue;
                index_.emplace(j, static_cast<int>(sites_.size()));
                sites_.push_back(j);
            }
    }

    int d() const { return s0.d(); }
    const std::vector<Site>& sites() const { return sites_; }
    int site_count() const { return static_cast<int>(sites_.size()); }
    bool contains(const Site& j) const { return index_.count(j) > 0; }
    int site_index(const Site& j) const { return index_.at(j); }

    bool compatible(const TruncationGrid& other) const {
        return s0.sites() == other.s0.sites() && Mx == other.Mx && Ny == other.Ny && Lmax == other.Lmax &&
               p == other.p;
    }

private:
    std::vector<Site> sites_;
    std::unordered_map<Site, int, SiteHash> index_;
};

// Packed theta index, d <= 8.
using EllKey = std::array<std::int8_t, 8>;

inline EllKey pack_ell(const std::vector<std::int64_t>& ell) {
    EllKey k{};
    for (std::size_t i = 0; i < ell.size(); ++i) {
        if (std::abs(ell[i]) > 127) throw std::invalid_argument("pack_ell: |l_i| too large");
        k[i] = static_cast<std::int8_t>(ell[i]);
    }
    return k;
}

inline std::vector<std::int64_t> unpack_ell(const EllKey& k, int d) {
    std::vector<std::int64_t> ell(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) ell[static_cast<std::size_t>(i)] = k[static_cast<std::size_t>(i)];
    return ell;
}

inline std::int64_t ell_l1(const EllKey& k, int d) {
    std::int64_t s = 0;
    for (int i = 0; i < d; ++i) s += std::abs(static_cast<std::int64_t>(k[static_cast<std::size_t>(i)]));
    return s;
}

// Coefficient key of a quadratic monomial. sigma = -1 stores
// e^{i l.theta} a_{(m1,n)} conj(a_{(m2,n)}); sigma = +1 stores
// v e^{i l.theta} a_{(m1,n)} a_{(m2,-n)} plus its complex conjugate.
struct QuadKey {
    std::int8_t sigma = -1;
    EllKey ell{};
    std::int16_t m1 = 0, m2 = 0, n = 0;

    friend bool operator==(const QuadKey&, const QuadKey&) = default;
    friend auto operator<=>(const QuadKey&, const QuadKey&) = default;
};

struct QuadKeyHash {
    std::size_t operator()(const QuadKey& k) const {
        std::uint64_t h = 0xcbf29ce484222325ull;
        auto mix = [&h](std::uint64_t v) {
            h ^= v;
            h *= 0x100000001b3ull;
        };
        mix(static_cast<std::uint8_t>(k.sigma));
        for (auto e : k.ell) mix(static_cast<std::uint8_t>(e));
        mix(static_cast<std::uint16_t>(k.m1));
        mix(static_cast<std::uint16_t>(k.m2));
        mix(static_cast<std::uint16_t>(k.n));
        return static_cast<std::size_t>(h);
    }
};

// Quadratic Hamiltonian on a truncation grid, stored as a sparse
// coefficient table. Every stored key satisfies the mass and momentum
// selection rules exactly.
class TruncatedQuadHam {
public:
    using Map = std::unordered_map<QuadKey, Complex, QuadKeyHash>;

    explicit TruncatedQuadHam(TruncationGrid grid) : grid_(std::move(grid)) {}

    const TruncationGrid& grid() const { return grid_; }
    const Map& coeffs() const { return c_; }
    bool empty() const { return c_.empty(); }
    std::size_t size() const { return c_.size(); }

    // Validates bounds and selection rules, canonicalizes sigma = +1 keys
    // (n > 0, or n = 0 with m1 <= m2) and accumulates.
    void add(int sigma, const std::vector<std::int64_t>& ell, std::int64_t m1, std::int64_t m2,
             std::int64_t n, Complex value);

    void scale(double factor) {
        for (auto& [k, v] : c_) v *= factor;
    }

    TruncatedQuadHam& operator+=(const TruncatedQuadHam& other);

    void prune(double tol = 0.0);

    // diagonal theta-average: the sigma = -1, l = 0, m1 = m2 coefficients
    std::vector<std::pair<Site, Complex>> diagonal_average() const;

    static bool selection_ok(const SupportSet& s0, const QuadKey& key, int d);

    // Reality as a function on phase space: sigma = -1 keys come in
    // conjugate pairs (m2,m1,n,-l); sigma = +1 keys are real by storage.
    bool is_real(double tol = 1e-12) const;
    void complete_reality();

    Map& raw() { return c_; }

private:
    TruncationGrid grid_;
    Map c_;
};

// Operator 2-norm on the weighted truncation of h^p of the nonnegative
// matrix with entries sum_l e^{s|l|_1} |coef|; sigma = -1 keys act
// (m1,n) -> (m2,n), sigma = +1 keys act in both conjugate directions.
double majorant_norm(const TruncatedQuadHam& H, double s);

// Max weighted row sum of the same matrix; cross-validation for the 2-norm.
double majorant_norm_inf(const TruncatedQuadHam& H, double s);

// Majorant norm of the reweighted coefficients
// max(<m1>^{-N1}, <n>^{-N2}) * coef; N = (0,0) gives the plain norm back.
double order_norm(const TruncatedQuadHam& H, double s, int N1, int N2);

struct BonySplit {
    TruncatedQuadHam para;      // |l|_1 <= c <m1>
    TruncatedQuadHam smoothing; // the rest; x-smoothing remainder
    double c = 0.0;             // 1 / (2 max |m_i|)
};

BonySplit bony_split(const TruncatedQuadHam& H, double s, double s_prime);

struct BracketResult {
    TruncatedQuadHam value;
    double dropped_mass = 0.0;    // sum of |coef| truncated beyond Lmax
    std::int64_t dropped_keys = 0;
};

// Quadratic Poisson bracket {F,G} with the convention
// {F,G} = sum_i (dF/dtheta_i dG/dY_i - dF/dY_i dG/dtheta_i)
//       + i sum_j (dF/da_j dG/dconj(a_j) - dF/dconj(a_j) dG/da_j).
BracketResult poisson_bracket(const TruncatedQuadHam& F, const TruncatedQuadHam& G);

} // namespace nlskam
