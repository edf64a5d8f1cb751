#include "nlskam/frequencies.hpp"

#include <algorithm>
#include <cmath>

namespace nlskam {

AdmissibleTuple canonical_form(const AdmissibleTuple& t) {
    auto sorted = [](AdmissibleTuple u) {
        std::vector<std::pair<Site, int>> entries;
        for (std::size_t i = 0; i < u.sites.size(); ++i) entries.emplace_back(u.sites[i], u.signs[i]);
        std::sort(entries.begin(), entries.end());
        for (std::size_t i = 0; i < entries.size(); ++i) {
            u.sites[i] = entries[i].first;
            u.signs[i] = entries[i].second;
        }
        return u;
    };
    AdmissibleTuple a = sorted(t);
    AdmissibleTuple b = t;
    for (auto& s : b.signs) s = -s;
    for (auto& v : b.ell) v = -v;
    b = sorted(b);
    return std::min(a, b);
}

Eigen::VectorXd omega(const FrequencyContext& ctx) {
    Eigen::VectorXd w(ctx.s0.d());
    for (int i = 0; i < ctx.s0.d(); ++i) {
        const double mi = static_cast<double>(ctx.s0[i]);
        w[i] = mi * mi - ctx.eps * ctx.lambda[i];
    }
    return w;
}

Eigen::VectorXd actions(const FrequencyContext& ctx) { return ctx.eps * ctx.lambda; }

OmegaTilde omega_tilde(const FrequencyContext& ctx, const Site& j) {
    const SiteClass cls = classify_site(ctx.s0, j);
    OmegaTilde out;
    switch (cls.kind) {
        case SiteClass::Kind::Tangential:
            throw std::invalid_argument("omega_tilde: tangential site has no normal frequency");
        case SiteClass::Kind::Generic:
            out.value = Complex(static_cast<double>(j.norm2()), 0.0);
            break;
        case SiteClass::Kind::HorizLine:
            out.value = Complex(ctx.eps * ctx.spectral.mu[cls.i] + static_cast<double>(j.n * j.n), 0.0);
            break;
        case SiteClass::Kind::CirclePlus: {
            const auto& pair = ctx.spectral.mu_pm.at({cls.i, cls.k});
            const double K = static_cast<double>(j.norm2() - ctx.s0[cls.i] * ctx.s0[cls.i]);
            out.value = K + ctx.eps * pair.first;
            break;
        }
        case SiteClass::Kind::CircleMinus: {
            const auto& pair = ctx.spectral.mu_pm.at({cls.i, cls.k});
            const double K = static_cast<double>(j.norm2() - ctx.s0[cls.k] * ctx.s0[cls.k]);
            out.value = K - ctx.eps * pair.second;
            break;
        }
    }
    out.is_complex = std::abs(out.value.imag()) > 0.0;
    return out;
}

Complex hatF(const FrequencyContext& ctx, int i, int k) {
    const int d = ctx.s0.d();
    if (i < 0 || i >= d || k < -1 || k >= d) throw std::invalid_argument("hatF: index out of range");
    if (k == -1) return Complex(ctx.eps * ctx.spectral.mu[i], 0.0);
    if (i == k) return Complex(0.0, 0.0);
    if (i < k) return ctx.eps * ctx.spectral.mu_pm.at({i, k}).first;
    return ctx.eps * ctx.spectral.mu_pm.at({k, i}).second;
}

namespace {

// integer part of the first-order frequency of a classified site
std::int64_t site_K(const SupportSet& s0, const Site& j, const SiteClass& cls) {
    switch (cls.kind) {
        case SiteClass::Kind::Generic: return j.norm2();
        case SiteClass::Kind::HorizLine: return j.n * j.n;
        case SiteClass::Kind::CirclePlus: return j.norm2() - s0[cls.i] * s0[cls.i];
        case SiteClass::Kind::CircleMinus: return j.norm2() - s0[cls.k] * s0[cls.k];
        default: throw std::invalid_argument("site_K: tangential site");
    }
}

} // namespace

Complex DivisorDecomposition::evaluate_F(const FrequencyContext& ctx) const {
    Complex f(0.0, 0.0);
    for (const auto& t : terms) {
        switch (t.kind) {
            case KFTerm::Kind::EllLinear: {
                double dot = 0.0;
                for (int i = 0; i < ctx.s0.d(); ++i)
                    dot += static_cast<double>(ell[static_cast<std::size_t>(i)]) * ctx.lambda[i];
                f += static_cast<double>(t.sign) * Complex(-dot, 0.0);
                break;
            }
            case KFTerm::Kind::Mu:
                f += static_cast<double>(t.sign) * Complex(ctx.spectral.mu[t.i], 0.0);
                break;
            case KFTerm::Kind::MuPlus:
                f += static_cast<double>(t.sign) * ctx.spectral.mu_pm.at({t.i, t.k}).first;
                break;
            case KFTerm::Kind::MuMinus:
                f += static_cast<double>(t.sign) * ctx.spectral.mu_pm.at({t.i, t.k}).second;
                break;
        }
    }
    return f;
}

DivisorDecomposition kf_decompose(const FrequencyContext& ctx, const AdmissibleTuple& tuple) {
    if (tuple.order() != 2 && tuple.order() != 3)
        throw std::invalid_argument("kf_decompose: order must be 2 or 3");
    if (tuple.ell.size() != static_cast<std::size_t>(ctx.s0.d()))
        throw std::invalid_argument("kf_decompose: ell dimension != d");

    DivisorDecomposition dec;
    dec.ell = tuple.ell;
    dec.terms.push_back({KFTerm::Kind::EllLinear, -1, -1, +1});

    std::int64_t omega0_ell = 0;
    for (int i = 0; i < ctx.s0.d(); ++i)
        omega0_ell += tuple.ell[static_cast<std::size_t>(i)] * ctx.s0[i] * ctx.s0[i];

    for (int r = 0; r < tuple.order(); ++r) {
        const Site& j = tuple.sites[static_cast<std::size_t>(r)];
        const int sign = tuple.signs[static_cast<std::size_t>(r)];
        const SiteClass cls = classify_site(ctx.s0, j);
        dec.K_sites += sign * site_K(ctx.s0, j, cls);
        switch (cls.kind) {
            case SiteClass::Kind::Generic:
                break; // no first-order correction
            case SiteClass::Kind::HorizLine:
                dec.terms.push_back({KFTerm::Kind::Mu, cls.i, -1, sign});
                break;
            case SiteClass::Kind::CirclePlus:
                dec.terms.push_back({KFTerm::Kind::MuPlus, cls.i, cls.k, sign});
                break;
            case SiteClass::Kind::CircleMinus:
                dec.terms.push_back({KFTerm::Kind::MuMinus, cls.i, cls.k, -sign});
                break;
            case SiteClass::Kind::Tangential:
                throw std::domain_error("kf_decompose: tangential site in tuple");
        }
    }
    dec.K = omega0_ell + dec.K_sites;
    dec.complex_F = std::abs(dec.evaluate_F(ctx).imag()) > 0.0;
    return dec;
}

Complex divisor_value(const FrequencyContext& ctx, const AdmissibleTuple& tuple) {
    const auto dec = kf_decompose(ctx, tuple);
    return Complex(static_cast<double>(dec.K), 0.0) + ctx.eps * dec.evaluate_F(ctx);
}

DivisorInterval corrected_divisor_interval(const FrequencyContext& ctx, const AdmissibleTuple& tuple,
                                           const CorrectionBudget& budget) {
    DivisorInterval out;
    out.center = divisor_value(ctx, tuple);
    out.complex_flag = std::abs(out.center.imag()) > 0.0;

    const double e2 = budget.M0 * ctx.eps * ctx.eps;
    double w = 0.0;
    for (const auto& j : tuple.sites) {
        const double m2 = 1.0 + static_cast<double>(j.m * j.m);
        if (j.n == 0) {
            w += e2 / std::sqrt(m2);
        } else {
            const double n2 = 1.0 + static_cast<double>(j.n * j.n);
            w += e2 / m2 + e2 / (m2 + n2);
        }
    }
    out.width = w;
    out.lo = out.center.real() - w;
    out.hi = out.center.real() + w;
    return out;
}

} // namespace nlskam
