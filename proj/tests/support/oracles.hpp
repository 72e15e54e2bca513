#ifndef LGP_TEST_ORACLES_HPP
#define LGP_TEST_ORACLES_HPP

// Independent reference computations used to pin expected values in tests.
// Everything here is deliberately naive and kept apart from the library's
// own algorithms.

#include <random>
#include <vector>

#include "lgp/mpoly.hpp"
#include "lgp/resultant.hpp"

namespace lgp::oracles {

// Sylvester matrix of p, q w.r.t. v (dimension deg_v p + deg_v q)
inline std::vector<std::vector<MPoly>> sylvester_matrix(const MPoly& p, const MPoly& q, Var v) {
    auto pc = p.coeffs_in(v);
    auto qc = q.coeffs_in(v);
    int m = static_cast<int>(pc.size()) - 1;
    int n = static_cast<int>(qc.size()) - 1;
    int dim = m + n;
    std::vector<std::vector<MPoly>> M(static_cast<size_t>(dim),
                                      std::vector<MPoly>(static_cast<size_t>(dim)));
    for (int r = 0; r < n; ++r)
        for (int j = 0; j <= m; ++j) M[r][r + (m - j)] = pc[static_cast<size_t>(j)];
    for (int r = 0; r < m; ++r)
        for (int j = 0; j <= n; ++j) M[n + r][r + (n - j)] = qc[static_cast<size_t>(j)];
    return M;
}

// determinant by cofactor expansion along the first row
inline MPoly cofactor_det(const std::vector<std::vector<MPoly>>& M) {
    size_t n = M.size();
    if (n == 0) return MPoly(Rat(1));
    if (n == 1) return M[0][0];
    MPoly acc;
    for (size_t j = 0; j < n; ++j) {
        if (M[0][j].is_zero()) continue;
        std::vector<std::vector<MPoly>> sub(n - 1, std::vector<MPoly>(n - 1));
        for (size_t r = 1; r < n; ++r) {
            size_t cc = 0;
            for (size_t c = 0; c < n; ++c) {
                if (c == j) continue;
                sub[r - 1][cc++] = M[r][c];
            }
        }
        MPoly term = M[0][j] * cofactor_det(sub);
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

inline MPoly sylvester_resultant(const MPoly& p, const MPoly& q, Var v) {
    return cofactor_det(sylvester_matrix(p, q, v));
}

// naive term-by-term evaluation with repeated multiplication
inline Rat naive_eval(const MPoly& p, const Rat& x, const Rat& y, const Rat& z, const Rat& t) {
    Rat acc(0);
    const Rat coord[4] = {x, y, z, t};
    for (const auto& [k, c] : p.terms()) {
        Rat term = c;
        for (int i = 0; i < kNumVars; ++i) {
            unsigned e = exp_of(k, static_cast<Var>(i));
            for (unsigned j = 0; j < e; ++j) term *= coord[i];
        }
        acc += term;
    }
    return acc;
}

// random polynomial with small integer coefficients
inline MPoly random_poly(std::mt19937& rng, const std::vector<Var>& vars, int max_deg,
                         int n_terms, int coeff_range = 9) {
    std::uniform_int_distribution<int> dc(-coeff_range, coeff_range);
    std::uniform_int_distribution<int> de(0, max_deg);
    MPoly p(Rat(0), MPoly::mask_of(vars));
    for (int i = 0; i < n_terms; ++i) {
        ExpKey k = 0;
        for (Var v : vars) k = exp_set(k, v, static_cast<unsigned>(de(rng)));
        int c = dc(rng);
        if (c) p.add_term(k, Rat(c));
    }
    return p;
}

inline Rat random_rat(std::mt19937& rng, int num_range = 20, int den_range = 7) {
    std::uniform_int_distribution<int> dn(-num_range, num_range);
    std::uniform_int_distribution<int> dd(1, den_range);
    return make_rat(dn(rng), dd(rng));
}

} // namespace lgp::oracles

#endif
