#include "nlskam/kam.hpp"

#include <algorithm>
#include <cmath>

namespace nlskam {

DiagHam build_diag_initial(const FrequencyContext& ctx, const TruncationGrid& grid) {
    if (grid.s0.sites() != ctx.s0.sites())
        throw std::invalid_argument("build_diag_initial: grid/context support mismatch");
    DiagHam D(grid);
    D.omega = omega(ctx);
    // Frequencies in the un-rotated coordinates (the frame of the H1/Z1
    // kernels and of the stored selection rules): the first-order table
    // shifted back by the tangential frequency of each rotated column.
    for (const auto& j : grid.sites()) {
        const auto cls = classify_site(ctx.s0, j);
        const auto ot = omega_tilde(ctx, j);
        if (ot.is_complex)
            throw std::domain_error("build_diag_initial: hyperbolic circle pair on the grid (complex frequency)");
        double shift = 0.0;
        if (cls.kind == SiteClass::Kind::HorizLine || cls.kind == SiteClass::Kind::CirclePlus)
            shift = D.omega[cls.i];
        else if (cls.kind == SiteClass::Kind::CircleMinus)
            shift = D.omega[cls.k];
        D.freq[j] = ot.value.real() + shift;
    }
    return D;
}

FirstOrderHam build_H1_Z1(const SupportSet& s0, const Eigen::VectorXd& lambda, double eps,
                          const TruncationGrid& grid) {
    if (grid.s0.sites() != s0.sites()) throw std::invalid_argument("build_H1_Z1: grid support mismatch");
    if (static_cast<std::int64_t>(grid.Mx) < s0.max_abs())
        throw std::invalid_argument("build_H1_Z1: grid does not cover the tangential columns");
    require_positive(lambda, "build_H1_Z1");
    const auto rep = check_genericity(s0, 0);
    if (!rep.generic) throw std::domain_error("build_H1_Z1: support set is not generic");

    const int d = s0.d();
    FirstOrderHam out{TruncatedQuadHam(grid), TruncatedQuadHam(grid), {}};

    auto ell_pair = [&](int i, int j, int si, int sj) {
        std::vector<std::int64_t> e(static_cast<std::size_t>(d), 0);
        e[static_cast<std::size_t>(i)] += si;
        e[static_cast<std::size_t>(j)] += sj;
        return e;
    };
    auto in_m = [&](std::int64_t m) { return std::abs(m) <= grid.Mx; };

    // horizontal kernels, one a.conj(a) ladder per ordered pair (i,j)
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            if (i == j) continue;
            const double root = std::sqrt(lambda[i] * lambda[j]);
            const auto ell = ell_pair(i, j, +1, -1);
            const double wi2 = static_cast<double>(s0[i] * s0[i] - s0[j] * s0[j]);

            for (std::int64_t m1 = -grid.Mx; m1 <= grid.Mx; ++m1) {
                const std::int64_t m2 = m1 + s0[i] - s0[j];
                if (!in_m(m2)) continue;
                for (std::int64_t n = -grid.Ny; n <= grid.Ny; ++n) {
                    if (n == 0) continue;
                    if (std::abs(m1) != std::abs(m2)) {
                        const double den = static_cast<double>(m1 * m1 - m2 * m2);
                        out.H1.add(-1, ell, m1, m2, n, 2.0 * eps * root * (wi2 * wi2) / (den * den));
                    } else {
                        // m2 = -m1: the diagonal kernel, no divisor weight
                        out.H1.add(-1, ell, m1, m2, n, 2.0 * eps * root);
                    }
                }
            }

            // resonant part: the horizontal-rectangle coefficients
            if (in_m(s0[j]) && in_m(s0[i])) {
                for (std::int64_t n = -grid.Ny; n <= grid.Ny; ++n) {
                    if (n == 0) continue;
                    out.Z1.add(-1, ell, s0[j], s0[i], n, 2.0 * eps * root);
                }
            }
        }
    }

    // out-diagonal kernel over ordered pairs (i,j), i = j included
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            const double root = std::sqrt(lambda[i] * lambda[j]);
            const auto ell = ell_pair(i, j, -1, -1);
            const double num = static_cast<double>(s0[i] * s0[i] + s0[j] * s0[j]);
            const std::int64_t msum = s0[i] + s0[j];
            for (std::int64_t m1 = -grid.Mx; m1 <= grid.Mx; ++m1) {
                const std::int64_t m2 = msum - m1;
                if (!in_m(m2)) continue;
                for (std::int64_t n = 1; n <= grid.Ny; ++n) {
                    const double den = static_cast<double>(m1 * m1 + m2 * m2 + 2 * n * n);
                    out.H1.add(+1, ell, m1, m2, n, Complex(eps * root * num / den, 0.0));
                }
            }
        }
    }

    // resonant part: the rotated-rectangle (circle) coefficients
    for (int i = 0; i < d; ++i) {
        for (int k = i + 1; k < d; ++k) {
            const double root = std::sqrt(lambda[i] * lambda[k]);
            const auto ell = ell_pair(i, k, -1, -1);
            for (const auto& pt : circle_integer_points(s0, i, k)) {
                if (pt.n <= 0 || pt.n > grid.Ny) continue;
                out.Z1.add(+1, ell, pt.m, s0[i] + s0[k] - pt.m, pt.n, Complex(2.0 * eps * root, 0.0));
            }
        }
    }

    // decoupled block matrices
    const Eigen::MatrixXd M = build_M(lambda);
    for (std::int64_t n = 1; n <= grid.Ny; ++n) {
        ZhatBlock blk;
        blk.type = SymplecticBlockMap::Type::I;
        blk.n = n;
        blk.K = static_cast<double>(n * n);
        blk.flow_matrix = (blk.K * Eigen::MatrixXd::Identity(d, d) + eps * M).cast<Complex>();
        for (int i = 0; i < d; ++i) blk.sites.push_back({s0[i], n});
        out.blocks.push_back(std::move(blk));
    }
    for (int i = 0; i < d; ++i) {
        for (int k = i + 1; k < d; ++k) {
            const Eigen::Matrix2d N = build_N(lambda[i], lambda[k]);
            for (const auto& pt : circle_integer_points(s0, i, k)) {
                if (pt.n <= 0 || pt.n > grid.Ny) continue;
                ZhatBlock blk;
                blk.type = SymplecticBlockMap::Type::II;
                blk.site = pt;
                blk.partner = {s0[i] + s0[k] - pt.m, -pt.n};
                blk.K = static_cast<double>(pt.norm2() - s0[i] * s0[i]);
                blk.flow_matrix = (blk.K * Eigen::Matrix2d::Identity() + eps * N).cast<Complex>();
                blk.sites = {blk.site, blk.partner};
                out.blocks.push_back(std::move(blk));
            }
        }
    }
    return out;
}

namespace {

double key_divisor(const DiagHam& D, const QuadKey& k) {
    const int d = D.grid.d();
    double dot = 0.0;
    for (int i = 0; i < d; ++i) dot += static_cast<double>(k.ell[static_cast<std::size_t>(i)]) * D.omega[i];
    if (k.sigma == -1) return dot + D.at({k.m1, k.n}) - D.at({k.m2, k.n});
    return dot + D.at({k.m1, k.n}) + D.at({k.m2, static_cast<std::int64_t>(-k.n)});
}

bool action_preserving_key(const QuadKey& k, int d) {
    return k.sigma == -1 && k.m1 == k.m2 && ell_l1(k.ell, d) == 0;
}

} // namespace

HomologicalSolution solve_homological(const DiagHam& D, const TruncatedQuadHam& Q, std::int64_t N,
                                      double gamma, double tau, double eps) {
    if (!D.grid.compatible(Q.grid())) throw std::invalid_argument("solve_homological: grid mismatch");
    if (N < 0 || gamma <= 0.0 || eps <= 0.0) throw std::invalid_argument("solve_homological: bad parameters");

    const int d = D.grid.d();
    const double threshold = eps * gamma * 0.5 * std::pow(static_cast<double>(std::max<std::int64_t>(N, 1)), -tau);

    HomologicalSolution sol{TruncatedQuadHam(Q.grid()), {}};
    std::unordered_map<Site, double, SiteHash> avg;

    for (const auto& [k, v] : Q.coeffs()) {
        if (action_preserving_key(k, d)) {
            avg[Site{k.m1, k.n}] += v.real();
            continue;
        }
        if (ell_l1(k.ell, d) > N) continue; // left to the tail Pi_{>N} Q
        const double delta = key_divisor(D, k);
        if (std::abs(delta) < threshold) throw SmallDivisorError(k, delta, threshold);
        sol.chi.raw().emplace(k, v / Complex(0.0, delta));
    }
    sol.avg.assign(avg.begin(), avg.end());
    std::sort(sol.avg.begin(), sol.avg.end());
    return sol;
}

KamStepResult kam_step(const DiagHam& D, const TruncatedQuadHam& Q, const KamStepConfig& cfg) {
    const auto sol = solve_homological(D, Q, cfg.N, cfg.gamma, cfg.tau, cfg.eps);
    const int d = D.grid.d();

    KamStepResult res{D, TruncatedQuadHam(Q.grid()), sol.chi, 0, 0.0};
    for (const auto& [site, dv] : sol.avg) res.D_new.freq[site] += dv;

    // tail beyond the solved theta band
    for (const auto& [k, v] : Q.coeffs())
        if (!action_preserving_key(k, d) && ell_l1(k.ell, d) > cfg.N) res.Q_new.raw().emplace(k, v);

    // B = Pi_{<=N}([Q] - Q): minus the solved part of Q
    TruncatedQuadHam B(Q.grid());
    for (const auto& [k, v] : Q.coeffs())
        if (!action_preserving_key(k, d) && ell_l1(k.ell, d) <= cfg.N) B.raw().emplace(k, -v);

    // Lie series: Q_new += sum_k Ad^k(Q)/k! + sum_k Ad^k(B)/(k+1)!
    // with Ad(H) = {H, chi}; truncated when a term drops below tol_lie
    // relative to the accumulated total.
    TruncatedQuadHam cur_q = Q;
    TruncatedQuadHam cur_b = B;
    double factorial = 1.0;
    double prev_term = std::numeric_limits<double>::infinity();
    int growth_streak = 0;
    for (int k = 1; k <= cfg.max_lie_terms; ++k) {
        factorial *= static_cast<double>(k);
        auto bq = poisson_bracket(cur_q, sol.chi);
        auto bb = poisson_bracket(cur_b, sol.chi);
        res.dropped_mass += bq.dropped_mass + bb.dropped_mass;
        cur_q = std::move(bq.value);
        cur_b = std::move(bb.value);

        TruncatedQuadHam term = cur_q;
        term.scale(1.0 / factorial);
        TruncatedQuadHam termb = cur_b;
        termb.scale(1.0 / (factorial * static_cast<double>(k + 1)));
        term += termb;
        res.Q_new += term;
        res.lie_terms = k;

        const double tn = majorant_norm(term, 0.0);
        const double total = majorant_norm(res.Q_new, 0.0);
        if (tn <= cfg.tol_lie * std::max(total, 1e-300)) break;
        growth_streak = (tn > prev_term) ? growth_streak + 1 : 0;
        if (k >= 8 && growth_streak >= 3)
            throw std::runtime_error("kam_step: Lie series terms are growing");
        prev_term = tn;
        if (k == cfg.max_lie_terms)
            throw std::runtime_error("kam_step: Lie series did not reach the tolerance");
    }
    res.Q_new.prune(0.0);
    return res;
}

KamTrace kam_iterate(const DiagHam& D0, const TruncatedQuadHam& Q0, const KamIterateConfig& cfg) {
    if (cfg.nu_max < 1) throw std::invalid_argument("kam_iterate: nu_max >= 1");
    const double c_star = 3.0 / (M_PI * M_PI); // 1 / (2 sum 1/nu^2)

    std::vector<double> s_seq(static_cast<std::size_t>(cfg.nu_max) + 2);
    s_seq[0] = cfg.s;
    for (int nu = 1; nu <= cfg.nu_max + 1; ++nu)
        s_seq[static_cast<std::size_t>(nu)] =
            s_seq[static_cast<std::size_t>(nu - 1)] - c_star * cfg.s / (static_cast<double>(nu) * nu);

    auto eta_at = [&](int nu) { return std::pow(cfg.eta0, std::pow(1.5, nu)); };

    TruncatedQuadHam Q = Q0;
    const double scale_target = cfg.gamma * cfg.gamma * cfg.eps;
    if (cfg.normalize_q0) {
        const double norm0 = majorant_norm(Q, s_seq[0]);
        if (norm0 > 0.0) Q.scale(cfg.eta0 * scale_target / norm0);
    }
    DiagHam D = D0;

    KamTrace trace;
    for (int nu = 0; nu <= cfg.nu_max; ++nu) {
        KamTraceStep step;
        step.nu = nu;
        step.s_nu = s_seq[static_cast<std::size_t>(nu)];
        step.eta_target = eta_at(nu);
        const double ds = s_seq[static_cast<std::size_t>(nu)] - s_seq[static_cast<std::size_t>(nu) + 1];
        step.N_nu = static_cast<std::int64_t>(std::ceil(std::log(1.0 / eta_at(nu)) / ds));
        step.q_norm = majorant_norm(Q, step.s_nu);
        step.q_norm_inf = majorant_norm_inf(Q, step.s_nu);
        step.target_met = step.q_norm <= scale_target * step.eta_target * (1.0 + 1e-9);
        if (!step.target_met && trace.first_target_failure < 0) trace.first_target_failure = nu;

        if (nu == cfg.nu_max) {
            trace.steps.push_back(step);
            break;
        }

        KamStepConfig scfg;
        scfg.N = std::min<std::int64_t>(step.N_nu, Q.grid().Lmax);
        scfg.gamma = cfg.gamma;
        scfg.tau = cfg.tau;
        scfg.eps = cfg.eps;
        scfg.tol_lie = cfg.tol_lie;
        try {
            auto res = kam_step(D, Q, scfg);
            TruncatedQuadHam incr(Q.grid());
            for (const auto& [site, dv] : res.D_new.freq) {
                const double delta = dv - D.freq.at(site);
                if (delta != 0.0)
                    incr.add(-1, std::vector<std::int64_t>(static_cast<std::size_t>(D.grid.d()), 0), site.m,
                             site.m, site.n, Complex(delta, 0.0));
            }
            step.freq_drift = majorant_norm(incr, step.s_nu);
            trace.total_drift += step.freq_drift;
            step.lie_terms = res.lie_terms;
            step.dropped_mass = res.dropped_mass;
            D = std::move(res.D_new);
            Q = std::move(res.Q_new);
        } catch (const SmallDivisorError& err) {
            step.excluded = true;
            trace.excluded = true;
            trace.exclusion = err;
            trace.steps.push_back(step);
            break;
        }
        trace.steps.push_back(step);
    }
    return trace;
}

} // namespace nlskam
