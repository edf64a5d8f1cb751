#pragma once

#include "nlskam/lattice.hpp"

#include <cstdint>
#include <vector>

namespace nlskam {

// Sites with signs plus a theta-Fourier index l: the data of a monomial
// e^{i l.theta} a^{s_1}_{j_1} ... a^{s_b}_{j_b} of order b in {2,3}.
struct AdmissibleTuple {
    std::vector<Site> sites;
    std::vector<int> signs;            // +1 for a, -1 for conjugate
    std::vector<std::int64_t> ell;

    int order() const { return static_cast<int>(sites.size()); }

    std::int64_t ell_l1() const {
        std::int64_t s = 0;
        for (auto v : ell) s += std::abs(v);
        return s;
    }

    friend bool operator==(const AdmissibleTuple&, const AdmissibleTuple&) = default;
    friend auto operator<=>(const AdmissibleTuple&, const AdmissibleTuple&) = default;
};

// One representative per orbit under entry permutations and the global
// conjugation (signs, l) -> (-signs, -l). The divisor modulus is invariant.
AdmissibleTuple canonical_form(const AdmissibleTuple& t);

} // namespace nlskam
