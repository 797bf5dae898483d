#pragma once

#include <algorithm>
#include <complex>
#include <random>
#include <vector>

#include "cycrir/poly.hpp"
#include "cycrir/rational.hpp"

namespace testsup {

using cycrir::cplx;
using cycrir::ComplexPoly;
using cycrir::RationalFn;

/// Greedy nearest matching of two root multisets; returns the largest
/// pairing distance (infinity on size mismatch).
inline double multiset_distance(std::vector<cplx> actual, const std::vector<cplx>& expected) {
    if (actual.size() != expected.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const cplx& e : expected) {
        std::size_t best = 0;
        double bestd = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < actual.size(); ++i) {
            const double d = std::abs(actual[i] - e);
            if (d < bestd) {
                bestd = d;
                best = i;
            }
        }
        worst = std::max(worst, bestd);
        actual.erase(actual.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return worst;
}

/// Random roots with pairwise separation >= min_sep inside the box
/// [-box, box]^2.
inline std::vector<cplx> separated_roots(std::mt19937& rng, int count, double min_sep = 0.3, double box = 2.0) {
    std::uniform_real_distribution<double> u(-box, box);
    std::vector<cplx> roots;
    while (static_cast<int>(roots.size()) < count) {
        const cplx cand(u(rng), u(rng));
        bool ok = true;
        for (const cplx& r : roots)
            if (std::abs(cand - r) < min_sep) ok = false;
        if (ok) roots.push_back(cand);
    }
    return roots;
}

/// Random stable proper real-coefficient rational function of denominator
/// degree deg. Poles keep a margin from the axis so grid oracles resolve the
/// peaks; zeros keep clear of the poles.
inline RationalFn random_stable_proper(std::mt19937& rng, int deg) {
    std::uniform_real_distribution<double> sigma(0.15, 3.0);
    std::uniform_real_distribution<double> omega(0.3, 3.0);
    std::uniform_real_distribution<double> zre(-3.0, 3.0);
    std::uniform_real_distribution<double> zim(-3.0, 3.0);
    std::uniform_real_distribution<double> gain(0.1, 10.0);
    std::bernoulli_distribution coin(0.5);

    std::vector<cplx> poles;
    while (static_cast<int>(poles.size()) < deg) {
        if (deg - static_cast<int>(poles.size()) >= 2 && coin(rng)) {
            const double sr = sigma(rng), wi = omega(rng);
            poles.emplace_back(-sr, wi);
            poles.emplace_back(-sr, -wi);
        } else {
            poles.emplace_back(-sigma(rng), 0.0);
        }
    }
    std::uniform_int_distribution<int> zc(0, deg);
    const int nzeros = zc(rng);
    std::vector<cplx> zeros;
    while (static_cast<int>(zeros.size()) < nzeros) {
        cplx cand;
        if (nzeros - static_cast<int>(zeros.size()) >= 2 && coin(rng)) {
            cand = cplx(zre(rng), std::abs(zim(rng)));
        } else {
            cand = cplx(zre(rng), 0.0);
        }
        bool ok = true;
        for (const cplx& p : poles)
            if (std::abs(cand - p) < 0.05 || std::abs(std::conj(cand) - p) < 0.05) ok = false;
        if (!ok) continue;
        if (cand.imag() != 0.0) {
            zeros.push_back(cand);
            zeros.push_back(std::conj(cand));
        } else {
            zeros.push_back(cand);
        }
    }
    const ComplexPoly num = ComplexPoly::from_roots(zeros, cplx(gain(rng)));
    const ComplexPoly den = ComplexPoly::from_roots(poles);
    return RationalFn(num, den);
}

}  // namespace testsup
