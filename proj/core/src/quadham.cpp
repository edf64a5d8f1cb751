#include "nlskam/quadham.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace nlskam {

namespace {

double site_weight_p(const Site& j, double p) {
    return std::pow(1.0 + static_cast<double>(j.norm2()), 0.5 * p);
}

double bracket_m(std::int64_t m) { return std::sqrt(1.0 + static_cast<double>(m) * static_cast<double>(m)); }

} // namespace

bool TruncatedQuadHam::selection_ok(const SupportSet& s0, const QuadKey& key, int d) {
    std::int64_t eta = 0, pi = 0;
    for (int i = 0; i < d; ++i) {
        eta += key.ell[static_cast<std::size_t>(i)];
        pi += static_cast<std::int64_t>(key.ell[static_cast<std::size_t>(i)]) * s0[i];
    }
    const std::int64_t sigma = key.sigma;
    return (eta + 1 + sigma == 0) && (pi + key.m1 + sigma * key.m2 == 0);
}

void TruncatedQuadHam::add(int sigma, const std::vector<std::int64_t>& ell, std::int64_t m1, std::int64_t m2,
                           std::int64_t n, Complex value) {
    if (sigma != 1 && sigma != -1) throw std::invalid_argument("TruncatedQuadHam::add: sigma must be +-1");
    if (static_cast<int>(ell.size()) != grid_.d())
        throw std::invalid_argument("TruncatedQuadHam::add: ell dimension mismatch");
    if (ell_l1(pack_ell(ell), grid_.d()) > grid_.Lmax)
        throw std::invalid_argument("TruncatedQuadHam::add: |l| beyond Lmax");

    QuadKey key;
    key.sigma = static_cast<std::int8_t>(sigma);
    key.ell = pack_ell(ell);
    key.m1 = static_cast<std::int16_t>(m1);
    key.m2 = static_cast<std::int16_t>(m2);
    key.n = static_cast<std::int16_t>(n);

    // canonical representative for the unordered site pair of a sigma=+ key
    if (sigma == +1 && (n < 0 || (n == 0 && m1 > m2))) {
        std::swap(key.m1, key.m2);
        key.n = static_cast<std::int16_t>(-n);
    }

    const Site j1{key.m1, key.n};
    const Site j2{key.m2, static_cast<std::int64_t>(sigma == -1 ? key.n : -key.n)};
    if (!grid_.contains(j1) || !grid_.contains(j2))
        throw std::invalid_argument("TruncatedQuadHam::add: site outside grid or tangential");
    if (!selection_ok(grid_.s0, key, grid_.d()))
        throw std::invalid_argument("TruncatedQuadHam::add: selection rules violated");

    auto [it, inserted] = c_.emplace(key, value);
    if (!inserted) it->second += value;
}

TruncatedQuadHam& TruncatedQuadHam::operator+=(const TruncatedQuadHam& other) {
    if (!grid_.compatible(other.grid_)) throw std::invalid_argument("TruncatedQuadHam::+=: grid mismatch");
    for (const auto& [k, v] : other.c_) {
        auto [it, inserted] = c_.emplace(k, v);
        if (!inserted) it->second += v;
    }
    return *this;
}

void TruncatedQuadHam::prune(double tol) {
    for (auto it = c_.begin(); it != c_.end();) {
        if (std::abs(it->second) <= tol)
            it = c_.erase(it);
        else
            ++it;
    }
}

std::vector<std::pair<Site, Complex>> TruncatedQuadHam::diagonal_average() const {
    std::map<Site, Complex> acc;
    for (const auto& [k, v] : c_) {
        if (k.sigma != -1 || k.m1 != k.m2) continue;
        if (ell_l1(k.ell, grid_.d()) != 0) continue;
        acc[Site{k.m1, k.n}] += v;
    }
    return {acc.begin(), acc.end()};
}

bool TruncatedQuadHam::is_real(double tol) const {
    for (const auto& [k, v] : c_) {
        if (k.sigma != -1) continue;
        QuadKey partner = k;
        std::swap(partner.m1, partner.m2);
        for (int i = 0; i < grid_.d(); ++i)
            partner.ell[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(-k.ell[static_cast<std::size_t>(i)]);
        const auto it = c_.find(partner);
        const Complex pv = (it == c_.end()) ? Complex(0, 0) : it->second;
        if (std::abs(pv - std::conj(v)) > tol * std::max(1.0, std::abs(v))) return false;
    }
    return true;
}

void TruncatedQuadHam::complete_reality() {
    Map extra;
    for (const auto& [k, v] : c_) {
        if (k.sigma != -1) continue;
        QuadKey partner = k;
        std::swap(partner.m1, partner.m2);
        for (int i = 0; i < grid_.d(); ++i)
            partner.ell[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(-k.ell[static_cast<std::size_t>(i)]);
        if (!c_.count(partner)) extra.emplace(partner, std::conj(v));
    }
    for (auto& [k, v] : extra) c_.emplace(k, v);
}

namespace {

// Row/column indices of the matrix contributions of one stored key.
// sigma = -1: one direction (input (m1,n) -> output (m2,n)); the reality
// partner key carries the transpose. sigma = +1: the conjugate pair couples
// both directions, (m2,-n) -> (m1,n) and (m1,n) -> (m2,-n).
template <typename F>
void for_each_direction(const TruncationGrid& grid, const QuadKey& k, F&& fn) {
    if (k.sigma == -1) {
        fn(grid.site_index({k.m2, k.n}), grid.site_index({k.m1, k.n}));
    } else {
        const int i1 = grid.site_index({k.m1, k.n});
        const int i2 = grid.site_index({k.m2, static_cast<std::int64_t>(-k.n)});
        fn(i1, i2);
        fn(i2, i1);
    }
}

Eigen::MatrixXd weighted_abs_matrix(const TruncatedQuadHam& H, double s,
                                    const std::function<double(const QuadKey&)>& reweight) {
    const auto& grid = H.grid();
    const int S = grid.site_count();
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(S, S);
    for (const auto& [k, v] : H.coeffs()) {
        const double w = std::exp(s * static_cast<double>(ell_l1(k.ell, grid.d()))) * std::abs(v) * reweight(k);
        for_each_direction(grid, k, [&](int row, int col) { T(row, col) += w; });
    }
    // h^p weights: conjugation by diag(<j>^p)
    Eigen::VectorXd wts(S);
    for (int i = 0; i < S; ++i) wts[i] = site_weight_p(grid.sites()[static_cast<std::size_t>(i)], grid.p);
    for (int r = 0; r < S; ++r)
        for (int c = 0; c < S; ++c) T(r, c) *= wts[r] / wts[c];
    return T;
}

double two_norm(const Eigen::MatrixXd& T) {
    if (T.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(T.transpose() * T, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

} // namespace

double majorant_norm(const TruncatedQuadHam& H, double s) {
    if (s < 0) throw std::invalid_argument("majorant_norm: s >= 0");
    return two_norm(weighted_abs_matrix(H, s, [](const QuadKey&) { return 1.0; }));
}

double majorant_norm_inf(const TruncatedQuadHam& H, double s) {
    if (s < 0) throw std::invalid_argument("majorant_norm_inf: s >= 0");
    const auto T = weighted_abs_matrix(H, s, [](const QuadKey&) { return 1.0; });
    double best = 0.0;
    for (Eigen::Index r = 0; r < T.rows(); ++r) best = std::max(best, T.row(r).sum());
    return best;
}

double order_norm(const TruncatedQuadHam& H, double s, int N1, int N2) {
    if (s < 0) throw std::invalid_argument("order_norm: s >= 0");
    auto reweight = [N1, N2](const QuadKey& k) {
        const double wm = std::pow(bracket_m(k.m1), -static_cast<double>(N1));
        const double wn = std::pow(bracket_m(k.n), -static_cast<double>(N2));
        return std::max(wm, wn);
    };
    return two_norm(weighted_abs_matrix(H, s, reweight));
}

BonySplit bony_split(const TruncatedQuadHam& H, double s, double s_prime) {
    if (!(0.0 < s_prime && s_prime < s)) throw std::invalid_argument("bony_split: need 0 < s' < s");
    const auto& grid = H.grid();
    const double max_m = static_cast<double>(grid.s0.max_abs());
    const double c = max_m > 0.0 ? 1.0 / (2.0 * max_m) : 1.0;

    BonySplit split{TruncatedQuadHam(grid), TruncatedQuadHam(grid), c};
    for (const auto& [k, v] : H.coeffs()) {
        const double lhs = static_cast<double>(ell_l1(k.ell, grid.d()));
        auto& target = (lhs <= c * bracket_m(k.m1)) ? split.para : split.smoothing;
        target.raw().emplace(k, v);
    }
    return split;
}

namespace {

struct EllKeyLess {
    bool operator()(const EllKey& a, const EllKey& b) const { return a < b; }
};

// dense block representation per theta index: H = sum_l e^{i l.theta}
// ( a^T A_l conj(a) + 1/2 a^T B_l a + 1/2 conj(a)^T C_l conj(a) )
struct Blocks {
    Eigen::MatrixXcd A, B, C;
    bool hasA = false, hasB = false, hasC = false;
};

using BlockMap = std::map<EllKey, Blocks, EllKeyLess>;

BlockMap to_blocks(const TruncatedQuadHam& H) {
    const auto& grid = H.grid();
    const int S = grid.site_count();
    BlockMap blocks;
    auto at = [&](const EllKey& l) -> Blocks& {
        auto it = blocks.find(l);
        if (it == blocks.end()) {
            Blocks b;
            b.A = Eigen::MatrixXcd::Zero(S, S);
            b.B = Eigen::MatrixXcd::Zero(S, S);
            b.C = Eigen::MatrixXcd::Zero(S, S);
            it = blocks.emplace(l, std::move(b)).first;
        }
        return it->second;
    };
    for (const auto& [k, v] : H.coeffs()) {
        if (k.sigma == -1) {
            auto& b = at(k.ell);
            b.A(grid.site_index({k.m1, k.n}), grid.site_index({k.m2, k.n})) += v;
            b.hasA = true;
        } else {
            const int i1 = grid.site_index({k.m1, k.n});
            const int i2 = grid.site_index({k.m2, static_cast<std::int64_t>(-k.n)});
            auto& b = at(k.ell);
            b.B(i1, i2) += v;
            b.B(i2, i1) += v;
            b.hasB = true;
            EllKey neg = k.ell;
            for (auto& e : neg) e = static_cast<std::int8_t>(-e);
            auto& bc = at(neg);
            bc.C(i1, i2) += std::conj(v);
            bc.C(i2, i1) += std::conj(v);
            bc.hasC = true;
        }
    }
    return blocks;
}

} // namespace

BracketResult poisson_bracket(const TruncatedQuadHam& F, const TruncatedQuadHam& G) {
    if (!F.grid().compatible(G.grid())) throw std::invalid_argument("poisson_bracket: grid mismatch");
    // The aa/conj-conj sector of the output is reconstructed from its
    // a.a block alone, which is valid only for real Hamiltonians.
    if (!F.is_real(1e-9) || !G.is_real(1e-9))
        throw std::invalid_argument("poisson_bracket: operands must be real Hamiltonians");
    const auto& grid = F.grid();
    const int S = grid.site_count();
    const int d = grid.d();

    const BlockMap bf = to_blocks(F);
    const BlockMap bg = to_blocks(G);

    BlockMap out;
    auto out_at = [&](const EllKey& l) -> Blocks& {
        auto it = out.find(l);
        if (it == out.end()) {
            Blocks b;
            b.A = Eigen::MatrixXcd::Zero(S, S);
            b.B = Eigen::MatrixXcd::Zero(S, S);
            it = out.emplace(l, std::move(b)).first;
        }
        return it->second;
    };

    BracketResult result{TruncatedQuadHam(grid), 0.0, 0};
    const Complex I(0.0, 1.0);

    for (const auto& [la, fb] : bf) {
        for (const auto& [lb, gb] : bg) {
            EllKey lsum{};
            std::int64_t l1 = 0;
            for (int i = 0; i < d; ++i) {
                lsum[static_cast<std::size_t>(i)] =
                    static_cast<std::int8_t>(la[static_cast<std::size_t>(i)] + lb[static_cast<std::size_t>(i)]);
                l1 += std::abs(static_cast<std::int64_t>(lsum[static_cast<std::size_t>(i)]));
            }
            const bool keep = l1 <= grid.Lmax;

            Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(S, S);
            Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(S, S);
            bool any = false;

            if (fb.hasA && gb.hasA) {
                A += I * (gb.A * fb.A - fb.A * gb.A);
                any = true;
            }
            if (fb.hasB && gb.hasC) {
                A += I * (fb.B * gb.C);
                any = true;
            }
            if (gb.hasB && fb.hasC) {
                A -= I * (gb.B * fb.C);
                any = true;
            }
            if (fb.hasB && gb.hasA) {
                B += I * (fb.B * gb.A.transpose() + gb.A * fb.B);
                any = true;
            }
            if (fb.hasA && gb.hasB) {
                B -= I * (fb.A * gb.B + gb.B * fb.A.transpose());
                any = true;
            }
            if (!any) continue;

            if (keep) {
                auto& blk = out_at(lsum);
                blk.A += A;
                blk.B += B;
                blk.hasA = blk.hasB = true;
            } else {
                // conj-conj mass mirrors the aa mass for real Hamiltonians
                result.dropped_mass += A.cwiseAbs().sum() + B.cwiseAbs().sum();
                result.dropped_keys += 1;
            }
        }
    }

    // back to sparse keys; only exact nonzeros are kept
    const auto& sites = grid.sites();
    for (const auto& [l, blk] : out) {
        const auto ell = unpack_ell(l, d);
        for (int r = 0; r < S; ++r) {
            for (int c = 0; c < S; ++c) {
                const Complex va = blk.A(r, c);
                if (va != Complex(0.0, 0.0)) {
                    const Site& j1 = sites[static_cast<std::size_t>(r)];
                    const Site& j2 = sites[static_cast<std::size_t>(c)];
                    if (j1.n != j2.n) throw std::logic_error("poisson_bracket: y-momentum broken in A block");
                    result.value.add(-1, ell, j1.m, j2.m, j1.n, va);
                }
                if (c >= r) {
                    const Complex vb = blk.B(r, c);
                    if (vb != Complex(0.0, 0.0)) {
                        const Site& j1 = sites[static_cast<std::size_t>(r)];
                        const Site& j2 = sites[static_cast<std::size_t>(c)];
                        if (j1.n + j2.n != 0) throw std::logic_error("poisson_bracket: y-momentum broken in B block");
                        const Complex v = (r == c) ? 0.5 * vb : vb;
                        result.value.add(+1, ell, j1.m, j2.m, j1.n, v);
                    }
                }
            }
        }
    }
    return result;
}

} // namespace nlskam
