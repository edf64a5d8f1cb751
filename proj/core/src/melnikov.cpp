#include "nlskam/melnikov.hpp"
#include "nlskam/rng.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>
#include <thread>

namespace nlskam {

namespace {

double ell_bracket(std::int64_t ell_l1) {
    return std::sqrt(1.0 + static_cast<double>(ell_l1) * static_cast<double>(ell_l1));
}

std::int64_t eta_of_ell(const std::vector<std::int64_t>& ell) {
    std::int64_t s = 0;
    for (auto v : ell) s += v;
    return s;
}

std::int64_t pi_of_ell(const SupportSet& s0, const std::vector<std::int64_t>& ell) {
    std::int64_t s = 0;
    for (int i = 0; i < s0.d(); ++i) s += ell[static_cast<std::size_t>(i)] * s0[i];
    return s;
}

} // namespace

SiteWeights site_weights(const SupportSet& s0, const Site& j) {
    const SiteClass cls = classify_site(s0, j);
    switch (cls.kind) {
        case SiteClass::Kind::Generic: return {1, j.m, j.n};
        case SiteClass::Kind::HorizLine: return {0, 0, j.n};
        case SiteClass::Kind::CirclePlus: return {0, j.m - s0[cls.i], j.n};
        case SiteClass::Kind::CircleMinus: return {0, j.m - s0[cls.k], j.n};
        case SiteClass::Kind::Tangential:
            throw std::invalid_argument("site_weights: tangential site");
    }
    throw std::logic_error("site_weights: unreachable");
}

bool is_action_preserving(const AdmissibleTuple& tuple) {
    for (auto v : tuple.ell)
        if (v != 0) return false;
    std::map<Site, int> signed_mult;
    for (std::size_t i = 0; i < tuple.sites.size(); ++i)
        signed_mult[tuple.sites[i]] += tuple.signs[i];
    for (const auto& [site, mult] : signed_mult)
        if (mult != 0) return false;
    return true;
}

bool satisfies_selection_rules(const SupportSet& s0, const AdmissibleTuple& tuple) {
    std::int64_t mass = eta_of_ell(tuple.ell);
    std::int64_t px = pi_of_ell(s0, tuple.ell);
    std::int64_t py = 0;
    for (std::size_t i = 0; i < tuple.sites.size(); ++i) {
        const auto w = site_weights(s0, tuple.sites[i]);
        mass += tuple.signs[i] * w.mass;
        px += tuple.signs[i] * w.px;
        py += tuple.signs[i] * w.py;
    }
    return mass == 0 && px == 0 && py == 0;
}

namespace {

struct WeightedSite {
    Site site;
    SiteWeights w;
};

// sites of the box with their selection weights, tangential excluded
std::vector<WeightedSite> box_sites(const SupportSet& s0, const EnumBounds& b) {
    std::vector<WeightedSite> out;
    for (std::int64_t m = -b.m_box; m <= b.m_box; ++m)
        for (std::int64_t n = -b.n_box; n <= b.n_box; ++n) {
            const Site j{m, n};
            if (s0.is_tangential(j)) continue;
            out.push_back({j, site_weights(s0, j)});
        }
    return out;
}

// sites whose weights match (mass, px, py) exactly
std::vector<Site> sites_with_weights(const SupportSet& s0, const EnumBounds& b,
                                     std::int64_t mass, std::int64_t px, std::int64_t py) {
    std::vector<Site> out;
    auto in_box = [&](const Site& j) { return std::abs(j.m) <= b.m_box && std::abs(j.n) <= b.n_box; };

    if (mass == 1) {
        const Site j{px, py};
        if (in_box(j) && !s0.is_tangential(j)) {
            const SiteClass cls = classify_site(s0, j);
            if (cls.kind == SiteClass::Kind::Generic) out.push_back(j);
        }
    } else if (mass == 0) {
        if (px == 0 && py != 0) {
            for (int i = 0; i < s0.d(); ++i) {
                const Site j{s0[i], py};
                if (in_box(j)) out.push_back(j);
            }
        }
        for (int i = 0; i < s0.d(); ++i) {
            for (int k = i + 1; k < s0.d(); ++k) {
                if (py > 0) {
                    const Site j{px + s0[i], py};
                    if (in_box(j) && (j.m - s0[i]) * (j.m - s0[k]) + j.n * j.n == 0) out.push_back(j);
                } else if (py < 0) {
                    const Site j{px + s0[k], py};
                    if (in_box(j) && (j.m - s0[i]) * (j.m - s0[k]) + j.n * j.n == 0) out.push_back(j);
                }
            }
        }
    }
    return out;
}

} // namespace

std::vector<AdmissibleTuple> enumerate_admissible(const SupportSet& s0, int order, const EnumBounds& bounds) {
    if (order != 2 && order != 3) throw std::invalid_argument("enumerate_admissible: order must be 2 or 3");
    if (bounds.ell_max < 0 || bounds.m_box < 1 || bounds.n_box < 0)
        throw std::invalid_argument("enumerate_admissible: bad bounds");

    const int d = s0.d();
    const auto sites = box_sites(s0, bounds);
    std::set<AdmissibleTuple> found;

    std::vector<std::vector<std::int64_t>> ells;
    ells.push_back(std::vector<std::int64_t>(static_cast<std::size_t>(d), 0));
    for_each_ell(d, static_cast<int>(bounds.ell_max), EllNorm::L1, /*half_orbit=*/false,
                 [&](const std::vector<std::int64_t>& ell) { ells.push_back(ell); });

    auto try_close = [&](const std::vector<std::int64_t>& ell, std::vector<WeightedSite> partial,
                         std::vector<int> signs, int last_sign) {
        // solve the last site from the three linear rules
        std::int64_t mass = eta_of_ell(ell), px = pi_of_ell(s0, ell), py = 0;
        for (std::size_t i = 0; i < partial.size(); ++i) {
            mass += signs[i] * partial[i].w.mass;
            px += signs[i] * partial[i].w.px;
            py += signs[i] * partial[i].w.py;
        }
        const std::int64_t need_mass = -last_sign * mass;
        const std::int64_t need_px = -last_sign * px;
        const std::int64_t need_py = -last_sign * py;
        if (need_mass != 0 && need_mass != 1) return;
        for (const auto& j : sites_with_weights(s0, bounds, need_mass, need_px, need_py)) {
            AdmissibleTuple t;
            for (const auto& ws : partial) t.sites.push_back(ws.site);
            t.sites.push_back(j);
            t.signs = signs;
            t.signs.push_back(last_sign);
            t.ell = ell;
            if (is_action_preserving(t)) continue;
            found.insert(canonical_form(t));
        }
    };

    for (const auto& ell : ells) {
        if (order == 2) {
            for (const auto& ws1 : sites) {
                for (int s1 : {+1, -1})
                    for (int s2 : {+1, -1}) try_close(ell, {ws1}, {s1}, s2);
            }
        } else {
            for (std::size_t a = 0; a < sites.size(); ++a) {
                for (std::size_t b = a; b < sites.size(); ++b) {
                    for (int s1 : {+1, -1})
                        for (int s2 : {+1, -1})
                            for (int s3 : {+1, -1})
                                try_close(ell, {sites[a], sites[b]}, {s1, s2}, s3);
                }
            }
        }
    }
    return {found.begin(), found.end()};
}

CaseLabel classify_case(const SupportSet& s0, const AdmissibleTuple& tuple) {
    int g = 0, s = 0, c = 0;
    for (const auto& j : tuple.sites) {
        const SiteClass cls = classify_site(s0, j);
        switch (cls.kind) {
            case SiteClass::Kind::Generic: ++g; break;
            case SiteClass::Kind::HorizLine: ++s; break;
            case SiteClass::Kind::CirclePlus:
            case SiteClass::Kind::CircleMinus: ++c; break;
            default: throw std::invalid_argument("classify_case: tangential site");
        }
    }
    CaseLabel label;
    label.order = tuple.order();
    label.name = std::string(static_cast<std::size_t>(g), 'G') + std::string(static_cast<std::size_t>(s), 'S') +
                 std::string(static_cast<std::size_t>(c), 'C');
    if (label.order == 2) {
        if (g == 2) label.index = 1;
        else if (g == 1 && s == 1) label.index = 2;
        else if (g == 1 && c == 1) label.index = 3;
        else if (s == 2) label.index = 4;
        else if (s == 1 && c == 1) label.index = 5;
        else label.index = 6;
    } else {
        if (g == 3) label.index = 1;
        else if (g == 2 && s == 1) label.index = 2;
        else if (g == 2 && c == 1) label.index = 3;
        else if (g == 1 && s == 2) label.index = 4;
        else if (g == 1 && c == 2) label.index = 5;
        else if (g == 1 && s == 1 && c == 1) label.index = 6;
        else if (s == 3) label.index = 7;
        else if (c == 3) label.index = 8;
        else if (s == 2 && c == 1) label.index = 9;
        else label.index = 10;
    }
    return label;
}

FMinScan f_min_scan(const SupportSet& s0, const std::vector<AdmissibleTuple>& tuples,
                    const Eigen::VectorXd& box_lo, const Eigen::VectorXd& box_hi,
                    int grid_per_dim, std::int64_t ell_bound, double eps) {
    if (grid_per_dim < 1) throw std::invalid_argument("f_min_scan: grid_per_dim >= 1");
    const int d = s0.d();
    FMinScan scan;
    scan.min_abs_F = std::numeric_limits<double>::infinity();

    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    Eigen::VectorXd lambda(d);
    const bool single = grid_per_dim == 1;
    while (true) {
        for (int i = 0; i < d; ++i) {
            const double t = single ? 0.5 : static_cast<double>(idx[static_cast<std::size_t>(i)]) / (grid_per_dim - 1);
            lambda[i] = box_lo[i] + t * (box_hi[i] - box_lo[i]);
        }
        FrequencyContext ctx(s0, lambda, eps);
        for (const auto& tuple : tuples) {
            if (tuple.ell_l1() > ell_bound) continue;
            const auto dec = kf_decompose(ctx, tuple);
            const Complex F = dec.evaluate_F(ctx);
            const double a = std::abs(F);
            if (a < scan.min_abs_F) {
                scan.min_abs_F = a;
                scan.argmin_tuple = tuple;
                scan.argmin_lambda = lambda;
                bool has_mu = false;
                for (const auto& t : dec.terms)
                    if (t.kind != KFTerm::Kind::EllLinear) has_mu = true;
                scan.identically_zero = !has_mu && tuple.ell_l1() == 0;
            }
        }
        int pos = 0;
        while (pos < d) {
            if (++idx[static_cast<std::size_t>(pos)] < grid_per_dim) break;
            idx[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == d) break;
    }
    return scan;
}

ScanReport melnikov_scan(const FrequencyContext& ctx, const ScanConfig& cfg_in) {
    ScanConfig cfg = cfg_in;
    if (cfg.tau <= 0.0) cfg.tau = static_cast<double>(ctx.s0.d()) + 2.0;

    ScanReport rep;
    rep.config = cfg;

    const auto tuples = enumerate_admissible(ctx.s0, cfg.order, cfg.bounds);
    const std::int64_t max_m2 = ctx.s0.max_abs() * ctx.s0.max_abs();
    const double N = std::max<double>(1.0, static_cast<double>(cfg.bounds.ell_max));

    struct Partial {
        std::uint64_t scanned = 0, skipped = 0, complex_skipped = 0;
        std::optional<Violation> worst;
        std::vector<Violation> violations;
        std::map<std::string, std::uint64_t> cases;
    };

    auto scan_range = [&](std::size_t lo, std::size_t hi) {
        Partial part;
        double worst_lb = std::numeric_limits<double>::infinity();
        for (std::size_t idx = lo; idx < hi; ++idx) {
            const auto& tuple = tuples[idx];
            ++part.scanned;
            part.cases[classify_case(ctx.s0, tuple).name]++;

            const auto dec = kf_decompose(ctx, tuple);
            if (cfg.apply_c1_skip && tuple.ell_l1() >= 1 && max_m2 >= 1 &&
                std::abs(dec.K_sites) >= 4 * tuple.ell_l1() * max_m2) {
                ++part.skipped;
                continue;
            }
            const auto interval = corrected_divisor_interval(ctx, tuple, cfg.budget);
            if (interval.complex_flag) {
                ++part.complex_skipped;
                continue;
            }
            const double threshold = (cfg.order == 3)
                                         ? cfg.eps * cfg.gamma / std::pow(ell_bracket(tuple.ell_l1()), cfg.tau)
                                         : cfg.eps * cfg.gamma * 0.5 * std::pow(N, -cfg.tau);
            const double lb = interval.abs_lower();
            if (lb < worst_lb) {
                worst_lb = lb;
                part.worst = Violation{tuple, lb, threshold};
            }
            if (interval.abs_upper() < threshold)
                part.violations.push_back({tuple, interval.abs_upper(), threshold});
        }
        return part;
    };

    std::vector<Partial> parts;
    if (cfg.workers <= 1) {
        parts.push_back(scan_range(0, tuples.size()));
    } else {
        std::vector<std::future<Partial>> futs;
        const std::size_t chunk = (tuples.size() + static_cast<std::size_t>(cfg.workers) - 1) /
                                  static_cast<std::size_t>(cfg.workers);
        for (int w = 0; w < cfg.workers; ++w) {
            const std::size_t lo = static_cast<std::size_t>(w) * chunk;
            const std::size_t hi = std::min(tuples.size(), lo + chunk);
            if (lo >= hi) break;
            futs.push_back(std::async(std::launch::async, scan_range, lo, hi));
        }
        for (auto& f : futs) parts.push_back(f.get());
    }

    // deterministic merge in worker-index order; ties on the worst divisor
    // resolve to the earlier tuple
    double worst_lb = std::numeric_limits<double>::infinity();
    for (const auto& part : parts) {
        rep.tuples_scanned += part.scanned;
        rep.skipped_c1 += part.skipped;
        rep.complex_skipped += part.complex_skipped;
        for (const auto& [name, count] : part.cases) rep.per_case_counts[name] += count;
        for (const auto& v : part.violations) rep.violations.push_back(v);
        if (part.worst && part.worst->divisor_abs < worst_lb) {
            worst_lb = part.worst->divisor_abs;
            rep.worst = part.worst;
        }
    }
    return rep;
}

MeasureReport measure_estimate(const SupportSet& s0, const MeasureConfig& cfg_in) {
    MeasureConfig cfg = cfg_in;
    const int d = s0.d();
    if (cfg.tau <= 0.0) cfg.tau = static_cast<double>(d) + 2.0;
    if (cfg.box_lo.size() == 0) {
        cfg.box_lo = Eigen::VectorXd::Constant(d, 0.5);
        cfg.box_hi = Eigen::VectorXd::Constant(d, 1.0);
    }
    if (cfg.gamma_list.empty()) throw std::invalid_argument("measure_estimate: empty gamma list");

    MeasureReport rep;
    rep.config = cfg;

    const auto tuples = enumerate_admissible(s0, 3, cfg.bounds);
    rep.tuples_used = tuples.size();

    double box_volume = 1.0;
    for (int i = 0; i < d; ++i) box_volume *= (cfg.box_hi[i] - cfg.box_lo[i]);

    struct Partial {
        std::vector<std::uint64_t> excluded;   // per gamma
        std::vector<std::uint64_t> tuple_hits; // per probe
        std::uint64_t complex_hits = 0;
    };

    const std::size_t ngamma = cfg.gamma_list.size();
    const std::size_t nprobe = cfg.per_tuple_probes.size();

    auto run_range = [&](std::uint64_t lo, std::uint64_t hi) {
        Partial part;
        part.excluded.assign(ngamma, 0);
        part.tuple_hits.assign(nprobe, 0);
        Eigen::VectorXd lambda(d);
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            auto rng = stream_for(cfg.seed, idx);
            for (int i = 0; i < d; ++i)
                lambda[i] = cfg.box_lo[i] + rng.uniform() * (cfg.box_hi[i] - cfg.box_lo[i]);
            FrequencyContext ctx(s0, lambda, cfg.eps);

            // v = min over tuples of |divisor| <l>^tau / eps; excluded(gamma) iff v < gamma
            double v = std::numeric_limits<double>::infinity();
            for (const auto& tuple : tuples) {
                const Complex div = divisor_value(ctx, tuple);
                if (std::abs(div.imag()) > 0.0) {
                    ++part.complex_hits;
                    continue;
                }
                const double scaled = std::abs(div.real()) * std::pow(ell_bracket(tuple.ell_l1()), cfg.tau) / cfg.eps;
                v = std::min(v, scaled);
            }
            for (std::size_t g = 0; g < ngamma; ++g)
                if (v < cfg.gamma_list[g]) ++part.excluded[g];

            for (std::size_t pi = 0; pi < nprobe; ++pi) {
                const Complex div = divisor_value(ctx, cfg.per_tuple_probes[pi]);
                if (std::abs(div.imag()) > 0.0) continue;
                if (std::abs(div.real()) < cfg.eps * cfg.per_tuple_alpha) ++part.tuple_hits[pi];
            }
        }
        return part;
    };

    Partial total;
    total.excluded.assign(ngamma, 0);
    total.tuple_hits.assign(nprobe, 0);
    if (cfg.workers <= 1) {
        total = run_range(0, cfg.nsamples);
    } else {
        std::vector<std::future<Partial>> futs;
        const std::uint64_t chunk =
            (cfg.nsamples + static_cast<std::uint64_t>(cfg.workers) - 1) / static_cast<std::uint64_t>(cfg.workers);
        for (int w = 0; w < cfg.workers; ++w) {
            const std::uint64_t lo = static_cast<std::uint64_t>(w) * chunk;
            const std::uint64_t hi = std::min<std::uint64_t>(cfg.nsamples, lo + chunk);
            if (lo >= hi) break;
            futs.push_back(std::async(std::launch::async, run_range, lo, hi));
        }
        for (auto& f : futs) {
            const Partial part = f.get();
            for (std::size_t g = 0; g < ngamma; ++g) total.excluded[g] += part.excluded[g];
            for (std::size_t pi = 0; pi < nprobe; ++pi) total.tuple_hits[pi] += part.tuple_hits[pi];
            total.complex_hits += part.complex_hits;
        }
    }

    const double n = static_cast<double>(cfg.nsamples);
    for (std::size_t g = 0; g < ngamma; ++g) {
        MeasurePoint pt;
        pt.gamma = cfg.gamma_list[g];
        pt.excluded_fraction = static_cast<double>(total.excluded[g]) / n;
        const double sigma = std::sqrt(std::max(pt.excluded_fraction * (1.0 - pt.excluded_fraction), 1.0 / n) / n);
        pt.ci_lo = std::max(0.0, pt.excluded_fraction - 1.96 * sigma);
        pt.ci_hi = std::min(1.0, pt.excluded_fraction + 1.96 * sigma);
        rep.points.push_back(pt);
    }
    for (std::size_t pi = 0; pi < nprobe; ++pi) {
        TupleMeasure tm;
        tm.tuple = cfg.per_tuple_probes[pi];
        tm.alpha = cfg.per_tuple_alpha;
        const double p = static_cast<double>(total.tuple_hits[pi]) / n;
        tm.empirical_measure = p * box_volume;
        tm.sigma = box_volume * std::sqrt(std::max(p * (1.0 - p), 1.0 / n) / n);
        tm.lipschitz_bound = 16.0 * cfg.per_tuple_alpha / std::max<double>(1.0, static_cast<double>(tm.tuple.ell_l1()));
        rep.per_tuple.push_back(tm);
    }
    rep.complex_skipped = total.complex_hits;
    return rep;
}

} // namespace nlskam
