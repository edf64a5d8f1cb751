#include "doctest.h"

#include "nlskam/lattice.hpp"
#include "nlskam/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace nlskam;

namespace {

// Brute-force circle scan used as the independent oracle: test every m in a
// wide window and every n up to the diameter.
std::vector<Site> circle_oracle(const SupportSet& s0, int i, int k) {
    std::vector<Site> pts;
    const std::int64_t lo = std::min(s0[i], s0[k]) - 5, hi = std::max(s0[i], s0[k]) + 5;
    const std::int64_t nmax = std::abs(s0[i] - s0[k]) + 5;
    for (std::int64_t m = lo; m <= hi; ++m)
        for (std::int64_t n = -nmax; n <= nmax; ++n)
            if (n != 0 && (m - s0[i]) * (m - s0[k]) + n * n == 0) pts.push_back({m, n});
    std::sort(pts.begin(), pts.end());
    return pts;
}

bool generic_oracle(const std::vector<std::int64_t>& sites) {
    SupportSet s0(sites);
    std::set<Site> all;
    std::vector<std::set<Site>> circles;
    for (int i = 0; i < s0.d(); ++i)
        for (int k = i + 1; k < s0.d(); ++k) {
            const auto pts = circle_oracle(s0, i, k);
            circles.emplace_back(pts.begin(), pts.end());
        }
    for (std::size_t a = 0; a < circles.size(); ++a) {
        for (const auto& pt : circles[a]) {
            if (s0.index_of(pt.m) >= 0) return false; // on a horizontal translate
            for (std::size_t b = 0; b < circles.size(); ++b)
                if (b != a && circles[b].count(pt)) return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("circle integer points: frozen examples") {
    // exhaustive m-range scan of m(m-2)+n^2=0
    SupportSet a({0, 2});
    CHECK(circle_integer_points(a, 0, 1) == std::vector<Site>{{1, -1}, {1, 1}});

    // the midpoint ((m_i+m_k)/2,(m_k-m_i)/2) is an integer member
    SupportSet b({-1, 3});
    const auto pts = circle_integer_points(b, 0, 1);
    CHECK(pts == std::vector<Site>{{1, -2}, {1, 2}});
    CHECK(std::find(pts.begin(), pts.end(), Site{1, 2}) != pts.end());

    // n^2 = m(1-m) <= 0 forces n = 0, excluded
    SupportSet c({0, 1});
    CHECK(circle_integer_points(c, 0, 1).empty());
}

TEST_CASE("circle integer points: oracle equality and involution") {
    const std::vector<std::vector<std::int64_t>> supports = {{0, 2}, {-1, 3}, {-4, 0, 4}, {-3, 1, 2, 5}};
    for (const auto& sites : supports) {
        SupportSet s0(sites);
        for (int i = 0; i < s0.d(); ++i) {
            for (int k = i + 1; k < s0.d(); ++k) {
                const auto pts = circle_integer_points(s0, i, k);
                CHECK(pts == circle_oracle(s0, i, k));
                for (const auto& pt : pts) {
                    CHECK((pt.m - s0[i]) * (pt.m - s0[k]) + pt.n * pt.n == 0);
                    const Site mirror{s0[i] + s0[k] - pt.m, -pt.n};
                    CHECK(std::find(pts.begin(), pts.end(), mirror) != pts.end());
                    const Site twice{s0[i] + s0[k] - mirror.m, -mirror.n};
                    CHECK(twice == pt);
                }
            }
        }
    }
    CHECK_THROWS_AS(circle_integer_points(SupportSet({0, 2}), 1, 0), std::invalid_argument);
}

TEST_CASE("classify_site: frozen examples") {
    SupportSet s0({-1, 3});

    const auto horiz = classify_site(s0, {-1, 5});
    CHECK(horiz.kind == SiteClass::Kind::HorizLine);
    CHECK(horiz.i == 0);

    const auto plus = classify_site(s0, {1, 2});
    CHECK(plus.kind == SiteClass::Kind::CirclePlus);
    CHECK(plus.i == 0);
    CHECK(plus.k == 1);
    REQUIRE(plus.partner.has_value());
    CHECK(*plus.partner == Site{1, -2});
    CHECK(classify_site(s0, *plus.partner).kind == SiteClass::Kind::CircleMinus);

    CHECK(classify_site(s0, {0, 1}).kind == SiteClass::Kind::Generic);
    CHECK(classify_site(s0, {-1, 0}).kind == SiteClass::Kind::Tangential);
}

TEST_CASE("classify_site is a partition on a box") {
    SupportSet s0({-1, 3});
    int tangential = 0, horiz = 0, plus = 0, minus = 0, generic = 0;
    for (std::int64_t m = -6; m <= 6; ++m) {
        for (std::int64_t n = -6; n <= 6; ++n) {
            switch (classify_site(s0, {m, n}).kind) { // throws on any overlap
                case SiteClass::Kind::Tangential: ++tangential; break;
                case SiteClass::Kind::HorizLine: ++horiz; break;
                case SiteClass::Kind::CirclePlus: ++plus; break;
                case SiteClass::Kind::CircleMinus: ++minus; break;
                case SiteClass::Kind::Generic: ++generic; break;
            }
        }
    }
    CHECK(tangential == 2);
    CHECK(horiz == 2 * 12);
    CHECK(plus == 1);
    CHECK(minus == 1);
    CHECK(tangential + horiz + plus + minus + generic == 13 * 13);
}

TEST_CASE("classify_site reports overlapping classes for non-generic supports") {
    // (1,1) lies on the circle over (0,2) and on the translate of column 1
    SupportSet s0({0, 1, 2});
    CHECK_THROWS_AS(classify_site(s0, {1, 1}), AmbiguousClassError);
}

TEST_CASE("check_genericity: frozen examples") {
    {
        const auto rep = check_genericity(SupportSet({0, 2}), 0);
        CHECK(rep.generic);
        CHECK(rep.violations.empty());
    }
    {
        const auto rep = check_genericity(SupportSet({0, 1, 2}), 0);
        CHECK_FALSE(rep.generic);
        bool witness = false;
        for (const auto& v : rep.violations)
            if (v.kind == GenericityViolation::Kind::SCIntersection && (v.witness_site == Site{1, 1} || v.witness_site == Site{1, -1}))
                witness = true;
        CHECK(witness);
    }
    {
        const auto rep = check_genericity(SupportSet({1, 2, 3}), 4);
        CHECK_FALSE(rep.L_generic);
        bool witness = false;
        for (const auto& v : rep.violations) {
            if (v.kind != GenericityViolation::Kind::MomentumCombination) continue;
            if (v.witness_ell == std::vector<std::int64_t>{1, -2, 1} || v.witness_ell == std::vector<std::int64_t>{-1, 2, -1})
                witness = true;
        }
        CHECK(witness);
    }
}

TEST_CASE("check_genericity agrees with the brute-force oracle") {
    SplitMix64 rng(2024);
    int checked = 0;
    while (checked < 60) {
        std::vector<std::int64_t> sites;
        for (int i = 0; i < 3; ++i) sites.push_back(rng.uniform_int(-8, 8));
        std::sort(sites.begin(), sites.end());
        if (std::adjacent_find(sites.begin(), sites.end()) != sites.end()) continue;
        ++checked;
        CHECK(check_genericity(SupportSet(sites), 0).generic == generic_oracle(sites));
    }
}

TEST_CASE("density_experiment") {
    // d = 1: no circles, no lines, vacuous conditions
    const auto single = density_experiment(1, 7, 0, DensityMode::Exhaustive, 0, 0);
    CHECK(single.fraction == 1.0);

    // exhaustive d = 2, R = 5 against a direct count of all 55 pairs
    const auto ex = density_experiment(2, 5, 0, DensityMode::Exhaustive, 0, 0);
    CHECK(ex.total == 55);
    std::uint64_t oracle = 0;
    for (std::int64_t a = -5; a <= 5; ++a)
        for (std::int64_t b = a + 1; b <= 5; ++b)
            if (generic_oracle({a, b})) ++oracle;
    CHECK(ex.generic_count == oracle);

    // sampled estimate within 3 binomial standard deviations of exhaustive
    const auto sm = density_experiment(2, 5, 0, DensityMode::Sampled, 4000, 11);
    const double sigma = std::sqrt(ex.fraction * (1.0 - ex.fraction) / 4000.0);
    CHECK(std::abs(sm.fraction - ex.fraction) <= 3.0 * sigma + 1e-12);

    // deterministic under a fixed seed, any worker count
    const auto w1 = density_experiment(3, 10, 2, DensityMode::Sampled, 500, 7, 1);
    const auto w4 = density_experiment(3, 10, 2, DensityMode::Sampled, 500, 7, 4);
    CHECK(w1.generic_count == w4.generic_count);

    CHECK_THROWS_AS(density_experiment(6, 400, 0, DensityMode::Exhaustive, 0, 0), std::invalid_argument);
}

TEST_CASE("is_rectangle") {
    CHECK(is_rectangle({0, 0}, {2, 0}, {2, 1}, {0, 1}));
    const Site a{3, -2};
    CHECK(is_rectangle(a, a, a, a));
    CHECK_FALSE(is_rectangle({0, 0}, {1, 0}, {3, 0}, {2, 0}));
    // momentum holds but energies differ
    CHECK_FALSE(is_rectangle({0, 0}, {1, 1}, {3, 0}, {2, -1}));
}

namespace {

struct CanonicalMono {
    std::vector<std::pair<Site, int>> entries;
    std::vector<std::int64_t> ell;
    auto operator<=>(const CanonicalMono&) const = default;
};

CanonicalMono canonical_mono(Site j1, int s1, Site j2, int s2, std::vector<std::int64_t> ell) {
    auto build = [](Site a, int sa, Site b, int sb, std::vector<std::int64_t> l) {
        CanonicalMono m;
        m.entries = {{a, sa}, {b, sb}};
        std::sort(m.entries.begin(), m.entries.end());
        m.ell = std::move(l);
        return m;
    };
    auto flipped = ell;
    for (auto& v : flipped) v = -v;
    return std::min(build(j1, s1, j2, s2, ell), build(j1, -s1, j2, -s2, flipped));
}

// Scan of every |l|_1 = 2 quadratic monomial with K = 0 under the mass and
// momentum rules of the original coordinates.
std::set<CanonicalMono> birkhoff_oracle(const SupportSet& s0, std::int64_t n_cutoff) {
    const int d = s0.d();
    const std::int64_t mbox = 3 * s0.max_abs();
    std::set<CanonicalMono> found;

    std::vector<std::vector<std::int64_t>> ells;
    for_each_ell(d, 2, EllNorm::L1, false, [&](const std::vector<std::int64_t>& ell) {
        std::int64_t l1 = 0;
        for (auto v : ell) l1 += std::abs(v);
        if (l1 == 2) ells.push_back(ell);
    });

    for (const auto& ell : ells) {
        std::int64_t eta = 0, pi = 0, w0 = 0;
        for (int i = 0; i < d; ++i) {
            eta += ell[static_cast<std::size_t>(i)];
            pi += ell[static_cast<std::size_t>(i)] * s0[i];
            w0 += ell[static_cast<std::size_t>(i)] * s0[i] * s0[i];
        }
        for (std::int64_t m1 = -mbox; m1 <= mbox; ++m1)
            for (std::int64_t n1 = -n_cutoff; n1 <= n_cutoff; ++n1)
                for (std::int64_t m2 = -mbox; m2 <= mbox; ++m2)
                    for (std::int64_t n2 = -n_cutoff; n2 <= n_cutoff; ++n2)
                        for (int s1 : {+1, -1})
                            for (int s2 : {+1, -1}) {
                                const Site j1{m1, n1}, j2{m2, n2};
                                if (s0.is_tangential(j1) || s0.is_tangential(j2)) continue;
                                if (eta + s1 + s2 != 0) continue;
                                if (pi + s1 * m1 + s2 * m2 != 0) continue;
                                if (s1 * n1 + s2 * n2 != 0) continue;
                                if (w0 + s1 * j1.norm2() + s2 * j2.norm2() != 0) continue;
                                found.insert(canonical_mono(j1, s1, j2, s2, ell));
                            }
    }
    return found;
}

std::set<CanonicalMono> canonicalize(const std::vector<BirkhoffMonomial>& monos) {
    std::set<CanonicalMono> out;
    for (const auto& m : monos) out.insert(canonical_mono(m.site1, m.sign1, m.site2, m.sign2, m.ell));
    return out;
}

} // namespace

TEST_CASE("enumerate_birkhoff_resonant: frozen examples") {
    {
        // one conjugate circle pair for s0 = (-1,3)
        SupportSet s0({-1, 3});
        const auto monos = enumerate_birkhoff_resonant(s0, 2);
        int fam3 = 0, fam2 = 0;
        for (const auto& m : monos) {
            if (m.family == BirkhoffMonomial::Family::III) {
                ++fam3;
                CHECK(m.ell == std::vector<std::int64_t>{1, 1});
                CHECK(((m.site1 == Site{1, 2} && m.site2 == Site{1, -2}) ||
                       (m.site1 == Site{1, -2} && m.site2 == Site{1, 2})));
            }
            if (m.family == BirkhoffMonomial::Family::II) ++fam2;
        }
        CHECK(fam3 == 1);
        CHECK(fam2 == 0);
    }
    {
        // family i instances for s0 = (0,2), n_cutoff = 1
        SupportSet s0({0, 2});
        const auto monos = enumerate_birkhoff_resonant(s0, 1);
        bool direct = false, swapped = false;
        for (const auto& m : monos) {
            if (m.family != BirkhoffMonomial::Family::I) continue;
            if (m.ell == std::vector<std::int64_t>{1, -1} && m.site1 == Site{2, 1} && m.sign1 == 1 &&
                m.site2 == Site{0, 1} && m.sign2 == -1)
                direct = true;
            if (m.ell == std::vector<std::int64_t>{-1, 1} && m.site1 == Site{0, 1}) swapped = true;
        }
        CHECK(direct);
        CHECK(swapped);
    }
    {
        // family ii appears exactly when m_i = -m_j
        SupportSet s0({-2, 2});
        const auto monos = enumerate_birkhoff_resonant(s0, 1);
        int fam2 = 0;
        for (const auto& m : monos)
            if (m.family == BirkhoffMonomial::Family::II) ++fam2;
        CHECK(fam2 == 4); // (i,j) and (j,i) for n = +-1
    }
    CHECK_THROWS_AS(enumerate_birkhoff_resonant(SupportSet({0, 1, 2}), 1), std::domain_error);
}

TEST_CASE("enumerate_birkhoff_resonant equals the brute-force oracle") {
    const std::vector<std::vector<std::int64_t>> supports = {{-1, 3}, {0, 2}, {-4, 1, 3}, {-2, 2}};
    for (const auto& sites : supports) {
        SupportSet s0(sites);
        if (!check_genericity(s0, 0).generic) continue;
        CHECK(canonicalize(enumerate_birkhoff_resonant(s0, 4)) == birkhoff_oracle(s0, 4));
    }
}

TEST_CASE("for_each_ell respects the norm choice") {
    int count_l1 = 0, count_linf = 0;
    for_each_ell(2, 2, EllNorm::L1, false, [&](const std::vector<std::int64_t>&) { ++count_l1; });
    for_each_ell(2, 2, EllNorm::LInf, false, [&](const std::vector<std::int64_t>&) { ++count_linf; });
    CHECK(count_l1 == 12);   // |l|_1 <= 2, l != 0
    CHECK(count_linf == 24); // 5^2 - 1
}
