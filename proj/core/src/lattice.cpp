#include "nlskam/lattice.hpp"
#include "nlskam/rng.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>
#include <thread>

namespace nlskam {

namespace {

// exact integer square root; returns -1 when v is not a perfect square
std::int64_t isqrt_exact(std::int64_t v) {
    if (v < 0) return -1;
    auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(v))));
    for (std::int64_t c = std::max<std::int64_t>(0, r - 2); c <= r + 2; ++c)
        if (c * c == v) return c;
    return -1;
}

} // namespace

std::vector<Site> circle_integer_points(const SupportSet& s0, int i, int k) {
    if (i < 0 || k <= i || k >= s0.d())
        throw std::invalid_argument("circle_integer_points: need 0 <= i < k < d");
    const std::int64_t mi = s0[i], mk = s0[k];
    std::vector<Site> pts;
    // Outside [m_i, m_k] the product (m-m_i)(m-m_k) is positive and n^2 < 0.
    for (std::int64_t m = std::min(mi, mk); m <= std::max(mi, mk); ++m) {
        const std::int64_t n2 = -(m - mi) * (m - mk);
        const std::int64_t n = isqrt_exact(n2);
        if (n > 0) {
            pts.push_back({m, -n});
            pts.push_back({m, n});
        }
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

SiteClass classify_site(const SupportSet& s0, const Site& j) {
    std::vector<SiteClass> matches;

    if (s0.is_tangential(j)) {
        SiteClass c;
        c.kind = SiteClass::Kind::Tangential;
        c.i = s0.index_of(j.m);
        return c; // tangential wins by definition; S and C have n != 0
    }
    if (j.n != 0 && s0.index_of(j.m) >= 0) {
        SiteClass c;
        c.kind = SiteClass::Kind::HorizLine;
        c.i = s0.index_of(j.m);
        matches.push_back(c);
    }
    if (j.n != 0) {
        for (int i = 0; i < s0.d(); ++i) {
            for (int k = i + 1; k < s0.d(); ++k) {
                const std::int64_t mi = s0[i], mk = s0[k];
                if ((j.m - mi) * (j.m - mk) + j.n * j.n != 0) continue;
                SiteClass c;
                c.kind = j.n > 0 ? SiteClass::Kind::CirclePlus : SiteClass::Kind::CircleMinus;
                c.i = i;
                c.k = k;
                c.partner = Site{mi + mk - j.m, -j.n};
                matches.push_back(c);
            }
        }
    }

    if (matches.empty()) {
        SiteClass c;
        c.kind = SiteClass::Kind::Generic;
        return c;
    }
    if (matches.size() > 1)
        throw AmbiguousClassError(j, matches, "classify_site: overlapping classes (support not generic)");
    return matches.front();
}

void for_each_ell(int d, int L, EllNorm norm, bool half_orbit,
                  const std::function<void(const std::vector<std::int64_t>&)>& fn) {
    if (L <= 0) return;
    std::vector<std::int64_t> ell(static_cast<std::size_t>(d), 0);
    // depth-first over coordinates with remaining norm budget
    std::function<void(int, std::int64_t)> rec = [&](int pos, std::int64_t used) {
        if (pos == d) {
            bool nonzero = false, first_positive = false, seen = false;
            for (auto v : ell) {
                if (v != 0 && !seen) {
                    seen = true;
                    first_positive = v > 0;
                }
                nonzero |= (v != 0);
            }
            if (!nonzero) return;
            if (half_orbit && !first_positive) return;
            fn(ell);
            return;
        }
        const std::int64_t room = (norm == EllNorm::L1) ? L - used : L;
        for (std::int64_t v = -room; v <= room; ++v) {
            ell[static_cast<std::size_t>(pos)] = v;
            rec(pos + 1, (norm == EllNorm::L1) ? used + std::abs(v) : used);
        }
        ell[static_cast<std::size_t>(pos)] = 0;
    };
    rec(0, 0);
}

GenericityReport check_genericity(const SupportSet& s0, int L, EllNorm norm) {
    if (L < 0) throw std::invalid_argument("check_genericity: L must be >= 0");
    GenericityReport rep;
    rep.L_generic_up_to = L;

    const int d = s0.d();
    std::vector<std::vector<Site>> circles;
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < d; ++i)
        for (int k = i + 1; k < d; ++k) {
            circles.push_back(circle_integer_points(s0, i, k));
            pairs.emplace_back(i, k);
        }

    // S ∩ C: a circle point lies on a horizontal translate iff its column is tangential
    for (const auto& circ : circles)
        for (const auto& pt : circ)
            if (s0.index_of(pt.m) >= 0)
                rep.violations.push_back({GenericityViolation::Kind::SCIntersection, pt, {}});

    // pairwise circle intersections over distinct index pairs
    for (std::size_t a = 0; a < circles.size(); ++a) {
        std::set<Site> in_a(circles[a].begin(), circles[a].end());
        for (std::size_t b = a + 1; b < circles.size(); ++b)
            for (const auto& pt : circles[b])
                if (in_a.count(pt))
                    rep.violations.push_back({GenericityViolation::Kind::CCIntersection, pt, {}});
    }

    bool momentum_ok = true;
    for_each_ell(d, L, norm, /*half_orbit=*/true, [&](const std::vector<std::int64_t>& ell) {
        std::int64_t dot = 0;
        for (int i = 0; i < d; ++i) dot += ell[static_cast<std::size_t>(i)] * s0[i];
        if (dot == 0) {
            momentum_ok = false;
            rep.violations.push_back({GenericityViolation::Kind::MomentumCombination, Site{}, ell});
        }
    });

    bool geometric_ok = true;
    for (const auto& v : rep.violations)
        if (v.kind != GenericityViolation::Kind::MomentumCombination) geometric_ok = false;

    rep.generic = geometric_ok;
    rep.L_generic = geometric_ok && momentum_ok;
    return rep;
}

namespace {

bool is_l_generic(const std::vector<std::int64_t>& sites, int L, EllNorm norm) {
    SupportSet s0(sites);
    const auto rep = check_genericity(s0, L, norm);
    return rep.L_generic;
}

std::uint64_t binom(std::int64_t n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

} // namespace

DensityResult density_experiment(int d, std::int64_t R, int L, DensityMode mode,
                                 std::uint64_t samples, std::uint64_t seed,
                                 int workers, EllNorm norm) {
    if (d < 1 || R < d) throw std::invalid_argument("density_experiment: need d >= 1 and R >= d");
    DensityResult res;

    if (mode == DensityMode::Exhaustive) {
        const std::uint64_t total = binom(2 * R + 1, d);
        if (total == 0 || total > 20'000'000ull)
            throw std::invalid_argument("density_experiment: exhaustive enumeration intractable");
        std::vector<std::int64_t> cur(static_cast<std::size_t>(d));
        std::uint64_t generic = 0;
        std::function<void(int, std::int64_t)> rec = [&](int pos, std::int64_t from) {
            if (pos == d) {
                res.total += 1;
                if (is_l_generic(cur, L, norm)) ++generic;
                return;
            }
            for (std::int64_t m = from; m <= R; ++m) {
                cur[static_cast<std::size_t>(pos)] = m;
                rec(pos + 1, m + 1);
            }
        };
        rec(0, -R);
        res.generic_count = generic;
        res.fraction = static_cast<double>(generic) / static_cast<double>(res.total);
        return res;
    }

    // Sampled: d distinct integers uniform in [-R,R], sorted; per-sample
    // counter streams keep the result independent of the worker count.
    const std::uint64_t n = samples;
    auto count_range = [&](std::uint64_t lo, std::uint64_t hi) {
        std::uint64_t generic = 0;
        std::vector<std::int64_t> cur(static_cast<std::size_t>(d));
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            auto rng = stream_for(seed, idx);
            while (true) {
                for (int i = 0; i < d; ++i) cur[static_cast<std::size_t>(i)] = rng.uniform_int(-R, R);
                std::sort(cur.begin(), cur.end());
                if (std::adjacent_find(cur.begin(), cur.end()) == cur.end()) break;
            }
            if (is_l_generic(cur, L, norm)) ++generic;
        }
        return generic;
    };

    if (workers <= 1) {
        res.generic_count = count_range(0, n);
    } else {
        std::vector<std::future<std::uint64_t>> futs;
        const std::uint64_t chunk = (n + static_cast<std::uint64_t>(workers) - 1) / static_cast<std::uint64_t>(workers);
        for (int w = 0; w < workers; ++w) {
            const std::uint64_t lo = static_cast<std::uint64_t>(w) * chunk;
            const std::uint64_t hi = std::min(n, lo + chunk);
            if (lo >= hi) break;
            futs.push_back(std::async(std::launch::async, count_range, lo, hi));
        }
        for (auto& f : futs) res.generic_count += f.get();
    }
    res.total = n;
    res.fraction = n ? static_cast<double>(res.generic_count) / static_cast<double>(n) : 0.0;
    return res;
}

bool is_rectangle(const Site& j1, const Site& j2, const Site& j3, const Site& j4) {
    const bool momentum = (j1.m - j2.m + j3.m - j4.m == 0) && (j1.n - j2.n + j3.n - j4.n == 0);
    const bool energy = (j1.norm2() - j2.norm2() + j3.norm2() - j4.norm2() == 0);
    return momentum && energy;
}

std::vector<BirkhoffMonomial> enumerate_birkhoff_resonant(const SupportSet& s0, std::int64_t n_cutoff) {
    if (n_cutoff < 1) throw std::invalid_argument("enumerate_birkhoff_resonant: n_cutoff >= 1");
    const auto rep = check_genericity(s0, 0);
    if (!rep.generic)
        throw std::domain_error("enumerate_birkhoff_resonant: support set is not generic");

    const int d = s0.d();
    std::vector<BirkhoffMonomial> out;
    auto unit = [&](int i, int sign) {
        std::vector<std::int64_t> e(static_cast<std::size_t>(d), 0);
        e[static_cast<std::size_t>(i)] = sign;
        return e;
    };
    auto add_units = [&](int i, int j, int si, int sj) {
        auto e = unit(i, si);
        e[static_cast<std::size_t>(j)] += sj;
        return e;
    };

    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            if (i == j) continue;
            const bool opposite = (s0[i] == -s0[j]);
            for (std::int64_t n = -n_cutoff; n <= n_cutoff; ++n) {
                if (n == 0) continue;
                BirkhoffMonomial mono;
                mono.family = opposite ? BirkhoffMonomial::Family::II : BirkhoffMonomial::Family::I;
                mono.ell = add_units(i, j, +1, -1);
                mono.site1 = {s0[j], n};
                mono.sign1 = +1;
                mono.site2 = {s0[i], n};
                mono.sign2 = -1;
                out.push_back(std::move(mono));
            }
        }
    }

    for (int i = 0; i < d; ++i) {
        for (int k = i + 1; k < d; ++k) {
            for (const auto& pt : circle_integer_points(s0, i, k)) {
                if (pt.n <= 0 || pt.n > n_cutoff) continue;
                BirkhoffMonomial mono;
                mono.family = BirkhoffMonomial::Family::III;
                mono.ell = add_units(i, k, +1, +1);
                mono.site1 = pt;
                mono.sign1 = -1;
                mono.site2 = {s0[i] + s0[k] - pt.m, -pt.n};
                mono.sign2 = -1;
                out.push_back(std::move(mono));
            }
        }
    }
    return out;
}

} // namespace nlskam
