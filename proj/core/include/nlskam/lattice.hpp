#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlskam {

// A point (m,n) of the Fourier lattice Z^2; m is the x index, n the y index.
struct Site {
    std::int64_t m = 0;
    std::int64_t n = 0;

    friend bool operator==(const Site&, const Site&) = default;
    friend auto operator<=>(const Site&, const Site&) = default;
    std::int64_t norm2() const { return m * m + n * n; }
};

struct SiteHash {
    std::size_t operator()(const Site& s) const {
        std::uint64_t h = static_cast<std::uint64_t>(s.m) * 0x9e3779b97f4a7c15ull;
        h ^= static_cast<std::uint64_t>(s.n) + 0x517cc1b727220a95ull + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

// Ordered tangential sites m_1 < m_2 < ... < m_d on the x axis.
class SupportSet {
public:
    explicit SupportSet(std::vector<std::int64_t> sites) : sites_(std::move(sites)) {
        if (sites_.empty()) throw std::invalid_argument("SupportSet: empty");
        for (std::size_t i = 1; i < sites_.size(); ++i)
            if (sites_[i - 1] >= sites_[i])
                throw std::invalid_argument("SupportSet: sites must be strictly increasing");
    }

    int d() const { return static_cast<int>(sites_.size()); }
    std::int64_t operator[](int i) const { return sites_.at(static_cast<std::size_t>(i)); }
    const std::vector<std::int64_t>& sites() const { return sites_; }

    // index of m in the support, or -1
    int index_of(std::int64_t m) const {
        for (int i = 0; i < d(); ++i)
            if (sites_[static_cast<std::size_t>(i)] == m) return i;
        return -1;
    }

    std::int64_t max_abs() const {
        std::int64_t r = 0;
        for (auto m : sites_) r = std::max(r, std::abs(m));
        return r;
    }

    bool is_tangential(const Site& j) const { return j.n == 0 && index_of(j.m) >= 0; }

private:
    std::vector<std::int64_t> sites_;
};

// Class of a lattice site relative to a support set: the tangential sites
// themselves, the horizontal translates S (same column, n != 0), the
// circles C_ik with diameter endpoints (m_i,0),(m_k,0), or none of these.
struct SiteClass {
    enum class Kind { Tangential, HorizLine, CirclePlus, CircleMinus, Generic };
    Kind kind = Kind::Generic;
    int i = -1; // support index (HorizLine, circles)
    int k = -1; // second support index (circles only)
    std::optional<Site> partner; // opposite circle vertex (m_i+m_k-m, -n)

    bool on_circle() const { return kind == Kind::CirclePlus || kind == Kind::CircleMinus; }
};

class AmbiguousClassError : public std::domain_error {
public:
    AmbiguousClassError(Site site, std::vector<SiteClass> classes, const std::string& what)
        : std::domain_error(what), site(site), classes(std::move(classes)) {}
    Site site;
    std::vector<SiteClass> classes;
};

struct GenericityViolation {
    enum class Kind { SCIntersection, CCIntersection, MomentumCombination };
    Kind kind;
    Site witness_site{};                    // SC / CC intersections
    std::vector<std::int64_t> witness_ell;  // momentum combinations
};

struct GenericityReport {
    bool generic = false;            // S∩C = ∅ and pairwise disjoint circles
    int L_generic_up_to = 0;         // the L that was checked
    bool L_generic = false;          // generic and no momentum combination up to L
    std::vector<GenericityViolation> violations;
};

enum class EllNorm { L1, LInf };

// All integer points of the circle (m-m_i)(m-m_k) + n^2 = 0 with n != 0,
// sorted by (m,n). Indices are 0-based, i < k.
std::vector<Site> circle_integer_points(const SupportSet& s0, int i, int k);

SiteClass classify_site(const SupportSet& s0, const Site& j);

GenericityReport check_genericity(const SupportSet& s0, int L, EllNorm norm = EllNorm::L1);

struct DensityResult {
    std::uint64_t total = 0;
    std::uint64_t generic_count = 0;
    double fraction = 0.0;
};

enum class DensityMode { Exhaustive, Sampled };

DensityResult density_experiment(int d, std::int64_t R, int L, DensityMode mode,
                                 std::uint64_t samples, std::uint64_t seed,
                                 int workers = 1, EllNorm norm = EllNorm::L1);

// Rectangle resonance: j1 - j2 + j3 - j4 = 0 and the same alternating sum
// of squared norms vanishes.
bool is_rectangle(const Site& j1, const Site& j2, const Site& j3, const Site& j4);

// Quadratic monomials e^{i l.theta} a^s1 a^s2 that commute with the unperturbed
// flow: family i are the horizontal pairs over tangential columns, family ii
// occurs only when m_i = -m_j, family iii are the circle-vertex pairs.
struct BirkhoffMonomial {
    enum class Family { I, II, III };
    Family family;
    std::vector<std::int64_t> ell;
    Site site1, site2;
    int sign1 = +1, sign2 = -1;
};

std::vector<BirkhoffMonomial> enumerate_birkhoff_resonant(const SupportSet& s0, std::int64_t n_cutoff);

// Enumerate all l in Z^d with 0 < |l| <= L for the given norm, one
// representative per {l,-l} pair when half_orbit is set.
void for_each_ell(int d, int L, EllNorm norm, bool half_orbit,
                  const std::function<void(const std::vector<std::int64_t>&)>& fn);

} // namespace nlskam
