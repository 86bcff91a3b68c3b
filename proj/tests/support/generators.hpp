#pragma once

// Seeded random inputs for property tests.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace gen {

using Engine = std::mt19937_64;

inline double uniform(Engine& e, double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(e);
}

// Point on the probability simplex; `sparsity` is the chance each entry is zeroed.
inline std::vector<double> simplex(Engine& e, std::size_t n, double sparsity = 0.0) {
    std::exponential_distribution<double> ex(1.0);
    std::vector<double> p(n);
    double sum = 0.0;
    for (auto& v : p) {
        v = uniform(e) < sparsity ? 0.0 : ex(e);
        sum += v;
    }
    if (sum == 0.0) {
        p[0] = 1.0;
        return p;
    }
    for (auto& v : p) v /= sum;
    // Put the rounding residue on the largest entry so the sum is 1 to the last ulp or two.
    double total = 0.0;
    std::size_t big = 0;
    for (std::size_t i = 0; i < n; ++i) {
        total += p[i];
        if (p[i] > p[big]) big = i;
    }
    p[big] += 1.0 - total;
    return p;
}

inline std::vector<double> probabilities(Engine& e, std::size_t n) {
    std::vector<double> p(n);
    for (auto& v : p) v = uniform(e);
    return p;
}

// Haar-random qubit amplitudes.
inline std::pair<std::complex<double>, std::complex<double>> qubit(Engine& e) {
    std::normal_distribution<double> g;
    double x[4], n = 0.0;
    for (double& v : x) {
        v = g(e);
        n += v * v;
    }
    n = std::sqrt(n);
    return {{x[0] / n, x[1] / n}, {x[2] / n, x[3] / n}};
}

inline std::vector<std::complex<double>> state(Engine& e, std::size_t dim) {
    std::normal_distribution<double> g;
    std::vector<std::complex<double>> v(dim);
    double n = 0.0;
    for (auto& a : v) {
        a = {g(e), g(e)};
        n += std::norm(a);
    }
    for (auto& a : v) a /= std::sqrt(n);
    return v;
}

}  // namespace gen
