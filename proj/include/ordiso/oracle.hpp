#ifndef ORDISO_ORACLE_HPP
#define ORDISO_ORACLE_HPP

// Verification solvers. Neither is tuned for speed; both are written to be
// independent of the dual and pooling solvers in ordered.hpp.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "ordiso/core.hpp"
#include "ordiso/pava.hpp"

namespace ordiso::oracle {

/// Iterate of Dykstra's method over the three sets
///   S0 = {a nondecreasing} x R^n, S1 = R^n x {b nondecreasing}, S2 = {a <= b}.
struct DykstraState {
    Vector a, b;
    std::array<Vector, 3> inc_a; // correction increments, one pair per set
    std::array<Vector, 3> inc_b;
    std::size_t round = 0;
    double displacement = std::numeric_limits<double>::infinity();

    DykstraState(std::span<const double> u, std::span<const double> v)
        : a(u.begin(), u.end()), b(v.begin(), v.end()) {
        for (auto& p : inc_a) p.assign(u.size(), 0.0);
        for (auto& p : inc_b) p.assign(v.size(), 0.0);
    }
};

namespace detail {

// Projection of (a, b) onto {a <= b} in the norm sum w1 a^2 + sum w2 b^2.
inline void project_coupling(std::span<double> a, std::span<double> b, std::span<const double> w1,
                             std::span<const double> w2) {
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j] > b[j]) {
            const double m = (w1[j] * a[j] + w2[j] * b[j]) / (w1[j] + w2[j]);
            a[j] = m;
            b[j] = m;
        }
    }
}

} // namespace detail

/// Runs Dykstra rounds until the max elementwise change over a full round
/// drops to `tol`, or `max_rounds` is hit (result flagged non-converged).
inline PairFit dykstra_project(std::span<const double> u, std::span<const double> v, std::span<const double> w1,
                               std::span<const double> w2, double tol, std::size_t max_rounds,
                               DykstraState* state_out = nullptr) {
    const PairView data{u, v, w1, w2};
    data.validate();
    if (!(tol > 0.0)) throw DomainError("dykstra tolerance must be positive");

    const std::size_t n = u.size();
    DykstraState st(u, v);
    PavaWorkspace pava;
    Vector ta(n), tb(n), start_a(n), start_b(n);
    bool converged = false;

    while (st.round < max_rounds) {
        start_a = st.a;
        start_b = st.b;
        for (std::size_t set = 0; set < 3; ++set) {
            for (std::size_t j = 0; j < n; ++j) {
                ta[j] = st.a[j] + st.inc_a[set][j];
                tb[j] = st.b[j] + st.inc_b[set][j];
            }
            Vector& pa = st.inc_a[set];
            Vector& pb = st.inc_b[set];
            // pre-projection point kept in pa/pb, projection written to st.a/st.b
            pa = ta;
            pb = tb;
            switch (set) {
            case 0:
                pava.solve(ta, w1, st.a);
                st.b = tb;
                break;
            case 1:
                st.a = ta;
                pava.solve(tb, w2, st.b);
                break;
            default:
                st.a = ta;
                st.b = tb;
                detail::project_coupling(st.a, st.b, w1, w2);
                break;
            }
            for (std::size_t j = 0; j < n; ++j) {
                pa[j] -= st.a[j];
                pb[j] -= st.b[j];
            }
        }
        ++st.round;
        double disp = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            disp = std::max(disp, std::abs(st.a[j] - start_a[j]));
            disp = std::max(disp, std::abs(st.b[j] - start_b[j]));
        }
        st.displacement = disp;
        if (disp <= tol) {
            converged = true;
            break;
        }
    }

    PairFit fit = PairFit::make(data, st.a, st.b, "dykstra", converged);
    if (state_out) *state_out = std::move(st);
    return fit;
}

inline PairFit dykstra_project(const PairedSample& sample, double tol, std::size_t max_rounds) {
    return dykstra_project(sample.y(), sample.z(), sample.w1(), sample.w2(), tol, max_rounds);
}

/// Largest sample accepted by brute_force.
inline constexpr std::size_t kBruteForceMaxN = 3;
/// Memory budget of the lattice search: one double per lattice pair plus one
/// byte per pair for every column but the last.
inline constexpr std::size_t kBruteForceMaxBytes = std::size_t{320} << 20;
/// Cap on lattice pairs per column, which bounds the running time.
inline constexpr double kBruteForceMaxStates = 1e8;

/// Exhaustive lattice search followed by coordinate-descent refinement.
///
/// The lattice spans [min data - 1, max data + 1] with spacing `resolution`
/// in every coordinate. The minimum over all feasible lattice pairs is found
/// by dynamic programming over columns: the state at column j is the lattice
/// pair (a_j, b_j) with a_j <= b_j, and the admissible predecessors of a
/// state form a 2-D prefix (a_{j-1} <= a_j, b_{j-1} <= b_j), so a running
/// prefix minimum makes every column O(K^2). This visits the same feasible
/// set as plain enumeration.
inline PairFit brute_force(const PairedSample& sample, double resolution) {
    const std::size_t n = sample.size();
    if (n > kBruteForceMaxN) {
        throw DomainError("brute_force refuses n > " + std::to_string(kBruteForceMaxN));
    }
    if (!(resolution > 0.0)) throw DomainError("resolution must be positive");

    const auto& y = sample.y();
    const auto& z = sample.z();
    const auto& w1 = sample.w1();
    const auto& w2 = sample.w2();

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t j = 0; j < n; ++j) {
        lo = std::min({lo, y[j], z[j]});
        hi = std::max({hi, y[j], z[j]});
    }
    lo -= 1.0;
    hi += 1.0;
    const double points = std::floor((hi - lo) / resolution) + 1.0;
    const double bytes = n > 1 ? points * points * (8.0 + static_cast<double>(n - 1)) : 0.0;
    if (points * points > kBruteForceMaxStates || bytes > static_cast<double>(kBruteForceMaxBytes)) {
        throw DomainError("brute_force lattice too fine for the data range");
    }
    const auto K = static_cast<std::size_t>(points);
    std::vector<double> grid(K);
    for (std::size_t k = 0; k < K; ++k) grid[k] = lo + static_cast<double>(k) * resolution;

    constexpr double inf = std::numeric_limits<double>::infinity();
    auto at = [K](std::size_t p, std::size_t q) { return p * K + q; };

    std::vector<double> ca(K), cb(K);
    auto column_costs = [&](std::size_t j) {
        for (std::size_t k = 0; k < K; ++k) {
            const double ra = y[j] - grid[k];
            const double rb = z[j] - grid[k];
            ca[k] = w1[j] * ra * ra;
            cb[k] = w2[j] * rb * rb;
        }
    };

    // table: cost of the best path ending in (p, q) at the current column,
    // turned in place into its prefix minimum over p' <= p, q' <= q.
    // dir[j][s]: where the prefix minimum at s in column j came from.
    enum : std::uint8_t { kHere, kFromP, kFromQ };
    std::vector<double> table;
    std::vector<std::vector<std::uint8_t>> dir;
    if (n > 1) {
        table.assign(K * K, inf);
        column_costs(0);
        for (std::size_t p = 0; p < K; ++p) {
            for (std::size_t q = p; q < K; ++q) table[at(p, q)] = ca[p] + cb[q];
        }
    }

    double best = inf;
    std::size_t state = 0;
    for (std::size_t j = (n > 1 ? 1 : 0); j < n; ++j) {
        if (j > 0) {
            auto& d = dir.emplace_back(K * K, kHere);
            for (std::size_t p = 0; p < K; ++p) {
                for (std::size_t q = 0; q < K; ++q) {
                    const std::size_t s = at(p, q);
                    if (p > 0 && table[at(p - 1, q)] < table[s]) {
                        table[s] = table[at(p - 1, q)];
                        d[s] = kFromP;
                    }
                    if (q > 0 && table[at(p, q - 1)] < table[s]) {
                        table[s] = table[at(p, q - 1)];
                        d[s] = kFromQ;
                    }
                }
            }
        }
        column_costs(j);
        const bool last = j + 1 == n;
        for (std::size_t p = 0; p < K; ++p) {
            for (std::size_t q = 0; q < K; ++q) {
                if (q < p) {
                    if (!last) table[at(p, q)] = inf;
                    continue;
                }
                const double c = ca[p] + cb[q] + (j > 0 ? table[at(p, q)] : 0.0);
                if (last) {
                    if (c < best) {
                        best = c;
                        state = at(p, q);
                    }
                } else {
                    table[at(p, q)] = c;
                }
            }
        }
    }

    Vector a(n), b(n);
    for (std::size_t j = n; j-- > 0;) {
        a[j] = grid[state / K];
        b[j] = grid[state % K];
        if (j == 0) break;
        const auto& d = dir[j - 1];
        while (d[state] != kHere) state -= d[state] == kFromP ? K : 1;
    }

    // Exact coordinate minimization with the neighbouring constraints frozen.
    for (int sweep = 0; sweep < 1000; ++sweep) {
        for (std::size_t j = 0; j < n; ++j) {
            double lo_a = j > 0 ? a[j - 1] : -inf;
            double hi_a = std::min(b[j], j + 1 < n ? a[j + 1] : inf);
            a[j] = std::clamp(y[j], lo_a, std::max(lo_a, hi_a));
            double lo_b = std::max(a[j], j > 0 ? b[j - 1] : -inf);
            double hi_b = j + 1 < n ? b[j + 1] : inf;
            b[j] = std::clamp(z[j], lo_b, std::max(lo_b, hi_b));
        }
    }

    return PairFit::make(sample.view(), std::move(a), std::move(b), "brute-force");
}

} // namespace ordiso::oracle

#endif // ORDISO_ORACLE_HPP
