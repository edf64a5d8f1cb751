#include "nlskam/spectra.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace nlskam {

Eigen::VectorXd poly_P_coeffs(const Eigen::VectorXd& lambda) {
    require_positive(lambda, "poly_P_coeffs");
    std::vector<double> l(lambda.data(), lambda.data() + lambda.size());
    const auto c = poly_P_coeffs_t<double>(l);
    return Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
}

Eigen::MatrixXd build_M(const Eigen::VectorXd& lambda) {
    require_positive(lambda, "build_M");
    const auto d = lambda.size();
    Eigen::MatrixXd M(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index k = 0; k < d; ++k)
            M(i, k) = (i == k) ? lambda[i] : 2.0 * std::sqrt(lambda[i] * lambda[k]);
    return M;
}

Eigen::Matrix2d build_N(double li, double lk) {
    if (!(li > 0.0) || !(lk > 0.0)) throw std::invalid_argument("build_N: need positive arguments");
    const double s = 2.0 * std::sqrt(li * lk);
    Eigen::Matrix2d N;
    N << li, s, -s, -lk;
    return N;
}

std::vector<Complex> companion_roots(const Eigen::VectorXd& coeffs) {
    const Eigen::Index deg = coeffs.size() - 1;
    if (deg < 1) return {};
    if (std::abs(coeffs[deg] - 1.0) > 1e-12)
        throw std::invalid_argument("companion_roots: expects a monic polynomial");
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(deg, deg);
    C.diagonal(-1).setOnes();
    for (Eigen::Index i = 0; i < deg; ++i) C(i, deg - 1) = -coeffs[i];
    Eigen::EigenSolver<Eigen::MatrixXd> solver(C, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("companion_roots: eigensolver failed");
    std::vector<Complex> roots(static_cast<std::size_t>(deg));
    for (Eigen::Index i = 0; i < deg; ++i) roots[static_cast<std::size_t>(i)] = solver.eigenvalues()[i];
    std::sort(roots.begin(), roots.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

Eigen::VectorXd mu_of_lambda(const Eigen::VectorXd& lambda) {
    require_positive(lambda, "mu_of_lambda");
    const Eigen::MatrixXd M = build_M(lambda);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("mu_of_lambda: eigensolver failed");
    Eigen::VectorXd mu = solver.eigenvalues(); // ascending

    // companion-matrix cross-check of the same spectrum
    const auto roots = companion_roots(poly_P_coeffs(lambda));
    const double scale = std::max(1.0, mu.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        const auto& r = roots[static_cast<std::size_t>(i)];
        if (std::abs(r.imag()) > 1e-8 * scale || std::abs(r.real() - mu[i]) > 1e-10 * scale)
            throw std::runtime_error("mu_of_lambda: companion-matrix cross-check failed");
    }
    return mu;
}

std::pair<Complex, Complex> mu_pm(double li, double lk) {
    if (!(li > 0.0) || !(lk > 0.0)) throw std::invalid_argument("mu_pm: need positive arguments");
    const Complex radicand(li * li + lk * lk - 14.0 * li * lk, 0.0);
    const Complex root = std::sqrt(radicand);
    const Complex tr(li - lk, 0.0);
    return {0.5 * (tr - root), 0.5 * (tr + root)};
}

RealityDiagnostics reality_diagnostics(double li, double lk) {
    if (!(li > 0.0) || !(lk > 0.0)) throw std::invalid_argument("reality_diagnostics: need positive arguments");
    RealityDiagnostics diag;
    diag.radicand = li * li + lk * lk - 14.0 * li * lk;
    diag.real_distinct = diag.radicand > 0.0;
    const double c_plus = (5.0 + std::sqrt(21.0)) / 2.0;
    const double c_minus = (5.0 - std::sqrt(21.0)) / 2.0;
    diag.cpm_cone_value = (lk - c_plus * li) * (lk - c_minus * li);
    diag.cpm_cone_positive = diag.cpm_cone_value > 0.0;
    diag.radicand_ratio_roots[0] = 7.0 - 4.0 * std::sqrt(3.0);
    diag.radicand_ratio_roots[1] = 7.0 + 4.0 * std::sqrt(3.0);
    return diag;
}

EigenGap eigen_gap(const Eigen::VectorXd& lambda) {
    require_positive(lambda, "eigen_gap");
    EigenGap out;
    std::vector<double> vals;
    const Eigen::VectorXd mu = mu_of_lambda(lambda);
    for (Eigen::Index i = 0; i < mu.size(); ++i) vals.push_back(mu[i]);
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        for (Eigen::Index k = i + 1; k < lambda.size(); ++k) {
            const auto [mp, mm] = mu_pm(lambda[i], lambda[k]);
            if (std::abs(mp.imag()) > 0.0 || std::abs(mm.imag()) > 0.0) {
                ++out.complex_pairs_excluded;
            } else {
                vals.push_back(mp.real());
                vals.push_back(mm.real());
            }
        }
    }
    for (std::size_t a = 0; a < vals.size(); ++a)
        for (std::size_t b = a + 1; b < vals.size(); ++b)
            out.gap = std::min(out.gap, std::abs(vals[a] - vals[b]));
    return out;
}

SpectralData make_spectral_data(const Eigen::VectorXd& lambda) {
    SpectralData data;
    data.mu = mu_of_lambda(lambda);
    for (Eigen::Index i = 0; i < lambda.size(); ++i)
        for (Eigen::Index k = i + 1; k < lambda.size(); ++k) {
            auto pair = mu_pm(lambda[i], lambda[k]);
            if (pair.first.imag() != 0.0 || pair.second.imag() != 0.0) data.all_real = false;
            data.mu_pm[{static_cast<int>(i), static_cast<int>(k)}] = pair;
        }
    data.gap = eigen_gap(lambda).gap;
    return data;
}

DomainScan find_domain_O1(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                          int grid_per_dim, double gamma_tilde) {
    if (lo.size() != hi.size() || lo.size() < 1)
        throw std::invalid_argument("find_domain_O1: inconsistent box");
    require_positive(lo, "find_domain_O1");
    if (grid_per_dim < 1) throw std::invalid_argument("find_domain_O1: grid_per_dim >= 1");

    const int d = static_cast<int>(lo.size());
    DomainScan scan;
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    Eigen::VectorXd point(d);
    const bool single = (grid_per_dim == 1);

    auto feasible = [&](const Eigen::VectorXd& l) {
        std::vector<double> vals;
        const Eigen::VectorXd mu = mu_of_lambda(l);
        for (Eigen::Index i = 0; i < mu.size(); ++i) vals.push_back(mu[i]);
        for (int i = 0; i < d; ++i)
            for (int k = i + 1; k < d; ++k) {
                const auto [mp, mm] = mu_pm(l[i], l[k]);
                if (mp.imag() != 0.0 || mm.imag() != 0.0) return false;
                vals.push_back(mp.real());
                vals.push_back(mm.real());
            }
        for (std::size_t a = 0; a < vals.size(); ++a)
            for (std::size_t b = a + 1; b < vals.size(); ++b)
                if (std::abs(vals[a] - vals[b]) < gamma_tilde) return false;
        return true;
    };

    while (true) {
        for (int i = 0; i < d; ++i) {
            const double t = single ? 0.5 : static_cast<double>(idx[static_cast<std::size_t>(i)]) / (grid_per_dim - 1);
            point[i] = lo[i] + t * (hi[i] - lo[i]);
        }
        if (feasible(point)) scan.feasible_points.push_back(point);
        int pos = 0;
        while (pos < d) {
            if (++idx[static_cast<std::size_t>(pos)] < grid_per_dim) break;
            idx[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == d) break;
    }
    scan.empty = scan.feasible_points.empty();
    return scan;
}

SymplecticBlockMap diagonalize_block_I(const Eigen::VectorXd& lambda, double K) {
    require_positive(lambda, "diagonalize_block_I");
    const Eigen::MatrixXd M = build_M(lambda);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("diagonalize_block_I: eigensolver failed");

    const Eigen::VectorXd mu = solver.eigenvalues();
    const double tol = 1e-8 * std::max(1.0, lambda.norm());
    for (Eigen::Index i = 1; i < mu.size(); ++i)
        if (mu[i] - mu[i - 1] < tol)
            throw std::domain_error("diagonalize_block_I: repeated eigenvalues");

    Eigen::MatrixXd U = solver.eigenvectors();
    for (Eigen::Index c = 0; c < U.cols(); ++c) {
        Eigen::Index imax = 0;
        U.col(c).cwiseAbs().maxCoeff(&imax);
        if (U(imax, c) < 0.0) U.col(c) *= -1.0;
    }

    SymplecticBlockMap map;
    map.type = SymplecticBlockMap::Type::I;
    map.U = U;
    map.eigenvalues = mu;
    map.frequencies = mu.array() + K;
    return map;
}

SymplecticBlockMap diagonalize_block_II(double li, double lk, double K) {
    const auto [mp, mm] = mu_pm(li, lk);
    if (mp.imag() != 0.0 || mm.imag() != 0.0)
        throw std::domain_error("diagonalize_block_II: complex eigenvalue pair");
    const double a = mp.real(), b = mm.real();
    if (std::abs(a - b) < 1e-8 * std::max({1.0, std::abs(li), std::abs(lk)}))
        throw std::domain_error("diagonalize_block_II: repeated eigenvalues");

    const Eigen::Matrix2d N = build_N(li, lk);
    const Eigen::Matrix2d Sigma = Eigen::Vector2d(1.0, -1.0).asDiagonal();

    // real eigenvector for eigenvalue mu of the 2x2 matrix N
    auto eigvec = [&](double mu) {
        Eigen::Vector2d v;
        if (std::abs(N(0, 1)) > std::abs(N(1, 0)))
            v << N(0, 1), mu - N(0, 0);
        else
            v << mu - N(1, 1), N(1, 0);
        return v;
    };

    Eigen::Vector2d va = eigvec(a), vb = eigvec(b);
    const double qa = va.dot(Sigma * va), qb = vb.dot(Sigma * vb);
    if (qa * qb >= 0.0)
        throw std::domain_error("diagonalize_block_II: degenerate Sigma signature");

    // Sigma-positive mode first, then the Sigma-negative one
    Eigen::Vector2d u1 = (qa > 0.0) ? va : vb;
    Eigen::Vector2d u2 = (qa > 0.0) ? vb : va;
    const double e1 = (qa > 0.0) ? a : b;
    const double e2 = (qa > 0.0) ? b : a;
    u1 /= std::sqrt(std::abs(u1.dot(Sigma * u1)));
    u2 /= std::sqrt(std::abs(u2.dot(Sigma * u2)));
    if (u1[0] < 0.0) u1 *= -1.0;
    if (u2[0] < 0.0) u2 *= -1.0;

    SymplecticBlockMap map;
    map.type = SymplecticBlockMap::Type::II;
    map.U.resize(2, 2);
    map.U.col(0) = u1;
    map.U.col(1) = u2;
    map.eigenvalues = Eigen::Vector2d(e1, e2);
    map.frequencies = Eigen::Vector2d(K + e1, -(K + e2));
    return map;
}

} // namespace nlskam
