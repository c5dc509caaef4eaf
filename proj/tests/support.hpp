#ifndef ORDISO_TESTS_SUPPORT_HPP
#define ORDISO_TESTS_SUPPORT_HPP

// Random instances and small reference solvers shared by the test binaries.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <span>

#include "ordiso/core.hpp"

namespace ordiso::testkit {

using Rng = std::mt19937_64;

// Standard normal responses, weights log-uniform in [0.1, 10].
inline PairedSample random_sample(Rng& rng, std::size_t n, bool weighted = true) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> log_w(std::log(0.1), std::log(10.0));
    Vector y(n), z(n), w1(n, 1.0), w2(n, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
        y[j] = normal(rng);
        z[j] = normal(rng);
        if (weighted) {
            w1[j] = std::exp(log_w(rng));
            w2[j] = std::exp(log_w(rng));
        }
    }
    return PairedSample::with_weights(std::move(y), std::move(z), std::move(w1), std::move(w2));
}

inline Vector random_nondecreasing(Rng& rng, std::size_t n, double scale = 3.0) {
    std::normal_distribution<double> normal(0.0, scale);
    Vector v(n);
    for (auto& x : v) x = normal(rng);
    std::sort(v.begin(), v.end());
    return v;
}

// Min-max formula for weighted isotonic regression:
// m_k = max_{i<=k} min_{j>=k} Av(i..j). O(n^3), independent of PAVA.
inline Vector minmax_isotonic(std::span<const double> data, std::span<const double> w) {
    const std::size_t n = data.size();
    Vector m(n);
    for (std::size_t k = 0; k < n; ++k) {
        double best = -INFINITY;
        for (std::size_t i = 0; i <= k; ++i) {
            double inner = INFINITY, sw = 0.0, swy = 0.0;
            for (std::size_t j = i; j < n; ++j) {
                sw += w[j];
                swy += w[j] * data[j];
                if (j >= k) inner = std::min(inner, swy / sw);
            }
            best = std::max(best, inner);
        }
        m[k] = best;
    }
    return m;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
    return d;
}

inline Vector reversed(std::span<const double> v) { return Vector(v.rbegin(), v.rend()); }

inline Vector negated_reversed(std::span<const double> v) {
    Vector out(v.rbegin(), v.rend());
    for (auto& x : out) x = -x;
    return out;
}

} // namespace ordiso::testkit

#endif
