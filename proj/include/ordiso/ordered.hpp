#ifndef ORDISO_ORDERED_HPP
#define ORDISO_ORDERED_HPP

// Least squares estimation of two nondecreasing curves a <= b.
//
// Two solvers share the pooling machinery below:
//   solve_dual            projected subgradient ascent on the multipliers of
//                         the coupling constraints a_j <= b_j;
//   project_ordered_pair  Dykstra-corrected alternation between row PAVA and
//                         coupling pooling, finished by level-set pooling.
// Both finish with a primal/dual certificate: a feasible pooled pair gives an
// upper bound, and multipliers rebuilt from it give a lower bound q(lambda).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ordiso/core.hpp"
#include "ordiso/pava.hpp"

namespace ordiso {

struct OrderedConeProblem {
    PairedSample sample;
    SolverConfig config;
};

/// Per-call trace of the dual solver. Entry k belongs to iterate k.
struct Diagnostics {
    std::size_t iterations = 0;
    bool converged = false;
    double gap = std::numeric_limits<double>::infinity();
    double final_violation = std::numeric_limits<double>::infinity();
    std::size_t certificate_jumps = 0;
    std::vector<double> dual_values;      // q(lambda_k)
    std::vector<double> best_dual_values; // max_{i<=k} of every evaluated lower bound
    std::vector<double> feasibility;      // max_j (a_j(lambda_k) - b_j(lambda_k))
    std::vector<double> primal_bounds;    // best feasible objective so far
    std::optional<bool> oracle_certified; // set when config.oracle_check
};

struct DualSolution {
    PairFit fit;
    DualState dual;
    Diagnostics diagnostics;
};

namespace detail {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    bool unite(std::size_t x, std::size_t y) {
        x = find(x);
        y = find(y);
        if (x == y) return false;
        parent_[std::max(x, y)] = std::min(x, y);
        return true;
    }

private:
    std::vector<std::size_t> parent_;
};

// Index of the constant run containing each position of a monotone row.
inline std::size_t run_ids(std::span<const double> row, std::vector<std::size_t>& ids) {
    ids.resize(row.size());
    std::size_t id = 0;
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (j > 0 && row[j] != row[j - 1]) ++id;
        ids[j] = id;
    }
    return row.empty() ? 0 : id + 1;
}

} // namespace detail

/// Minimizer of the Lagrangian L2(a, b) + sum_j lambda_j (a_j - b_j) over
/// nondecreasing a and b. The problem splits into two weighted PAVA calls:
///   a(lambda) = iso(y - lambda / (2 w1); w1),  b(lambda) = iso(z + lambda / (2 w2); w2).
class LagrangianSolver {
public:
    explicit LagrangianSolver(const PairView& data) : data_(data), ta_(data.size()), tb_(data.size()) {}

    /// Writes a(lambda), b(lambda) and returns the dual value q(lambda).
    double solve(std::span<const double> lambda, std::span<double> a, std::span<double> b) {
        const std::size_t n = data_.size();
        for (std::size_t j = 0; j < n; ++j) {
            ta_[j] = data_.y[j] - lambda[j] / (2.0 * data_.w1[j]);
            tb_[j] = data_.z[j] + lambda[j] / (2.0 * data_.w2[j]);
        }
        pava_a_.solve(ta_, data_.w1, a);
        pava_b_.solve(tb_, data_.w2, b);
        ::ordiso::detail::CompensatedSum q;
        for (std::size_t j = 0; j < n; ++j) {
            const double ra = data_.y[j] - a[j];
            const double rb = data_.z[j] - b[j];
            q.add(data_.w1[j] * ra * ra);
            q.add(data_.w2[j] * rb * rb);
            q.add(lambda[j] * (a[j] - b[j]));
        }
        return q.value();
    }

private:
    PairView data_;
    Vector ta_, tb_;
    PavaWorkspace pava_a_, pava_b_;
};

/// Dual value q(lambda) for lambda >= 0.
inline double dual_value(const PairView& data, std::span<const double> lambda) {
    Vector a(data.size()), b(data.size());
    LagrangianSolver solver(data);
    return solver.solve(lambda, a, b);
}

/// Pools level sets of the two-row order into a feasible pair.
///
/// Starting groups are the constant runs of the monotone rows `a` and `b`;
/// wherever `link[j]` is set, the run of a holding j and the run of b holding
/// j are joined. Each group takes the weighted mean of its data (y under w1
/// for a-positions, z under w2 for b-positions). Adjacent groups that violate
/// a row order or a coupling are then pooled and the means recomputed until
/// the pair is feasible; the single all-pooled group is feasible, so this
/// always terminates.
inline void pool_level_sets(const PairView& data, std::span<const double> a, std::span<const double> b,
                            std::span<const char> link, std::span<double> pa, std::span<double> pb) {
    const std::size_t n = data.size();
    std::vector<std::size_t> aid, bid;
    const std::size_t na = detail::run_ids(a, aid);
    const std::size_t nb = detail::run_ids(b, bid);
    detail::DisjointSets groups(na + nb);
    for (std::size_t j = 0; j < n; ++j) {
        if (link[j]) groups.unite(aid[j], na + bid[j]);
    }

    std::vector<::ordiso::detail::CompensatedSum> wsum(na + nb);
    std::vector<double> weight(na + nb);
    std::vector<double> mean(na + nb);
    for (;;) {
        std::fill(wsum.begin(), wsum.end(), ::ordiso::detail::CompensatedSum{});
        std::fill(weight.begin(), weight.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t ga = groups.find(aid[j]);
            const std::size_t gb = groups.find(na + bid[j]);
            wsum[ga].add(data.w1[j] * data.y[j]);
            weight[ga] += data.w1[j];
            wsum[gb].add(data.w2[j] * data.z[j]);
            weight[gb] += data.w2[j];
        }
        for (std::size_t g = 0; g < na + nb; ++g) {
            if (weight[g] > 0.0) mean[g] = wsum[g].value() / weight[g];
        }
        for (std::size_t j = 0; j < n; ++j) {
            pa[j] = mean[groups.find(aid[j])];
            pb[j] = mean[groups.find(na + bid[j])];
        }
        bool merged = false;
        for (std::size_t j = 0; j < n; ++j) {
            if (j + 1 < n && pa[j] > pa[j + 1]) merged |= groups.unite(aid[j], aid[j + 1]);
            if (j + 1 < n && pb[j] > pb[j + 1]) merged |= groups.unite(na + bid[j], na + bid[j + 1]);
            if (pa[j] > pb[j]) merged |= groups.unite(aid[j], na + bid[j]);
        }
        if (!merged) return;
    }
}

/// Multipliers rebuilt from a feasible pooled pair.
struct Certificate {
    Vector lambda;
    double dual_value = -std::numeric_limits<double>::infinity();
};

/// Builds lambda >= 0 supported on the tight couplings (a_j == b_j) so that
/// a and b satisfy the cumulative-residual conditions against the shifted
/// data y - lambda/(2 w1) and z + lambda/(2 w2), when such lambda exists.
///
/// With RA_k = sum_{j<=k} w1 (y - a), RB_k = sum_{j<=k} w2 (z - b) and
/// M_k = sum_{j<=k} lambda_j / 2, the conditions read
///   -RB_k <= M_k <= RA_k, M_k = RA_k at breaks of a, M_k = -RB_k at breaks of b.
/// M may only rise at tight positions, so it is set once per run between
/// consecutive tight positions to the largest value that run requires. The
/// returned dual value is evaluated exactly, so it is a valid lower bound
/// whether or not the pair was optimal.
inline Certificate certify(const PairView& data, std::span<const double> a, std::span<const double> b,
                           LagrangianSolver& solver) {
    const std::size_t n = data.size();
    Vector ra(n), rb(n);
    ::ordiso::detail::CompensatedSum sa, sb;
    for (std::size_t j = 0; j < n; ++j) {
        sa.add(data.w1[j] * (data.y[j] - a[j]));
        sb.add(data.w2[j] * (data.z[j] - b[j]));
        ra[j] = sa.value();
        rb[j] = sb.value();
    }
    Certificate cert;
    cert.lambda.assign(n, 0.0);
    double level = 0.0;
    std::size_t k = 0;
    while (k < n) {
        if (a[k] != b[k]) {
            ++k;
            continue;
        }
        std::size_t t = k + 1;
        while (t < n && a[t] != b[t]) ++t;
        double target = level;
        for (std::size_t i = k; i < t; ++i) {
            target = std::max(target, -rb[i]);
            if (i + 1 == n || a[i] < a[i + 1]) target = std::max(target, ra[i]);
        }
        cert.lambda[k] = 2.0 * (target - level);
        level = target;
        k = t;
    }
    Vector la(n), lb(n);
    cert.dual_value = solver.solve(cert.lambda, la, lb);
    return cert;
}

/// Pooling repair of an infeasible pair: every violated coupling is pooled to
/// (w1 a + w2 b) / (w1 + w2) and each row is re-projected by PAVA, for at most
/// `max_rounds` rounds. This converges but need not terminate, so whatever
/// violation is left is removed by a <- min(a, b), which keeps a
/// nondecreasing. On return the pair is exactly feasible.
inline void repair_feasibility(const PairView& data, std::span<double> a, std::span<double> b,
                               std::size_t max_rounds = 50) {
    const std::size_t n = data.size();
    PavaWorkspace pava;
    Vector tmp(n);
    auto project_rows = [&] {
        std::copy(a.begin(), a.end(), tmp.begin());
        pava.solve(tmp, data.w1, a);
        std::copy(b.begin(), b.end(), tmp.begin());
        pava.solve(tmp, data.w2, b);
    };
    project_rows();
    for (std::size_t round = 0; round < max_rounds && !is_feasible(a, b, 0.0); ++round) {
        for (std::size_t j = 0; j < n; ++j) {
            if (a[j] > b[j]) {
                const double m = (data.w1[j] * a[j] + data.w2[j] * b[j]) / (data.w1[j] + data.w2[j]);
                a[j] = m;
                b[j] = m;
            }
        }
        project_rows();
    }
    for (std::size_t j = 0; j < n; ++j) a[j] = std::min(a[j], b[j]);
}

// ---------------------------------------------------------------------------
// KKT certificate

struct KktViolation {
    enum class Kind { Infeasible, NegativeMultiplier, ComplementarySlackness, GcmA, GcmB };
    Kind kind;
    std::size_t index;
    double magnitude;
    std::string detail;
};

inline const char* to_string(KktViolation::Kind kind) {
    switch (kind) {
    case KktViolation::Kind::Infeasible: return "primal-feasibility";
    case KktViolation::Kind::NegativeMultiplier: return "dual-feasibility";
    case KktViolation::Kind::ComplementarySlackness: return "complementary-slackness";
    case KktViolation::Kind::GcmA: return "gcm-condition(a)";
    case KktViolation::Kind::GcmB: return "gcm-condition(b)";
    }
    return "unknown";
}

struct KktReport {
    std::vector<KktViolation> violations;
    [[nodiscard]] bool ok() const { return violations.empty(); }
    explicit operator bool() const { return ok(); }

    [[nodiscard]] std::string describe() const {
        std::string out;
        for (const auto& v : violations) {
            out += std::string(to_string(v.kind)) + " violated at index " + std::to_string(v.index) +
                   " (magnitude " + std::to_string(v.magnitude) + ")";
            if (!v.detail.empty()) out += ": " + v.detail;
            out += '\n';
        }
        return out;
    }
};

/// Optimality conditions for (a, b) with coupling multipliers lambda:
/// feasibility, lambda >= 0, complementary slackness, and the single-curve
/// cumulative-residual conditions for a against y - lambda/(2 w1) and for b
/// against z + lambda/(2 w2).
inline KktReport kkt_check(const PairView& data, std::span<const double> a, std::span<const double> b,
                           std::span<const double> lambda, double tol) {
    const std::size_t n = data.size();
    ::ordiso::detail::require_same_length(a.size(), n, "a");
    ::ordiso::detail::require_same_length(b.size(), n, "b");
    ::ordiso::detail::require_same_length(lambda.size(), n, "lambda");
    if (!(tol > 0.0)) throw DomainError("kkt tolerance must be positive");

    KktReport report;
    using Kind = KktViolation::Kind;
    for (std::size_t j = 0; j < n; ++j) {
        if (a[j] > b[j] + tol) report.violations.push_back({Kind::Infeasible, j, a[j] - b[j], "a > b"});
        if (j + 1 < n && a[j] > a[j + 1] + tol)
            report.violations.push_back({Kind::Infeasible, j, a[j] - a[j + 1], "a decreases"});
        if (j + 1 < n && b[j] > b[j + 1] + tol)
            report.violations.push_back({Kind::Infeasible, j, b[j] - b[j + 1], "b decreases"});
        if (lambda[j] < -tol) report.violations.push_back({Kind::NegativeMultiplier, j, -lambda[j], {}});
        const double slack = lambda[j] * (b[j] - a[j]);
        if (slack > tol) report.violations.push_back({Kind::ComplementarySlackness, j, slack, {}});
    }

    Vector shifted(n);
    for (std::size_t j = 0; j < n; ++j) shifted[j] = data.y[j] - lambda[j] / (2.0 * data.w1[j]);
    for (const auto& v : gcm_check(IsotonicProblem{shifted, data.w1}, a, tol).violations) {
        report.violations.push_back({Kind::GcmA, v.index, v.magnitude, to_string(v.kind)});
    }
    for (std::size_t j = 0; j < n; ++j) shifted[j] = data.z[j] + lambda[j] / (2.0 * data.w2[j]);
    for (const auto& v : gcm_check(IsotonicProblem{shifted, data.w2}, b, tol).violations) {
        report.violations.push_back({Kind::GcmB, v.index, v.magnitude, to_string(v.kind)});
    }
    return report;
}

inline KktReport kkt_check(const PairedSample& sample, const PairFit& fit, std::span<const double> lambda,
                           double tol) {
    return kkt_check(sample.view(), fit.a.values(), fit.b.values(), lambda, tol);
}

// ---------------------------------------------------------------------------
// Projected subgradient ascent on the dual

namespace detail {

// Tracks the best feasible pair and the best lower bound seen so far.
struct BoundTracker {
    double upper = std::numeric_limits<double>::infinity();
    Vector best_a, best_b;
    double lower = -std::numeric_limits<double>::infinity();
    Vector best_lambda;

    // A later candidate has to beat the incumbent by more than rounding, so
    // an exact row fit is not replaced by its recomputed pooled copy.
    void offer_primal(const PairView& data, std::span<const double> a, std::span<const double> b) {
        const double f = objective(data, a, b);
        if (!std::isfinite(upper) || f < upper - 1e-14 * std::abs(upper)) {
            upper = f;
            best_a.assign(a.begin(), a.end());
            best_b.assign(b.begin(), b.end());
        }
    }
    // Same margin for the lower bound: a rounding-level rise does not swap
    // the multipliers.
    bool offer_dual(double q, std::span<const double> lambda) {
        if (!std::isfinite(lower) || q > lower + 1e-14 * std::abs(lower)) {
            lower = q;
            best_lambda.assign(lambda.begin(), lambda.end());
            return true;
        }
        return false;
    }
};

// Builds pooled candidates from a monotone pair and the given link rule,
// offers them (and the pair itself when it is already ordered) as upper
// bounds and their multipliers as lower bounds.
// Returns true when the certificate improved the best lower bound.
inline bool recover_from(const PairView& data, std::span<const double> a, std::span<const double> b,
                         std::span<const char> link, LagrangianSolver& solver, BoundTracker& bounds,
                         Vector& pa, Vector& pb) {
    if (is_feasible(a, b, 0.0)) bounds.offer_primal(data, a, b);
    pool_level_sets(data, a, b, link, pa, pb);
    bounds.offer_primal(data, pa, pb);
    const Certificate cert = certify(data, pa, pb, solver);
    return bounds.offer_dual(cert.dual_value, cert.lambda);
}

} // namespace detail

inline constexpr int kMaxStalls = 5;

/// Projected subgradient ascent on q(lambda), lambda >= 0.
///
/// Iterate k evaluates a(lambda), b(lambda) by two PAVA calls; g = a - b is
/// the gradient of q. The step is lambda <- max(0, lambda + t g) with
/// t = s (UB - q(lambda)) / |g_proj|^2 (Polyak, UB = best feasible objective,
/// s starts at the step constant and is halved whenever the best lower bound
/// stalls) or t = c / (sqrt(k + 1) |g_proj|) (diminishing). Every iterate is also
/// turned into a feasible pair by level-set pooling; its multipliers give an
/// extra lower bound, and when that bound beats every earlier one the
/// iterate jumps to those multipliers. The loop stops once the current
/// iterate violates no coupling by more than feas_tol and the gap between
/// the best feasible objective and the best lower bound is <= gap_tol.
inline DualSolution solve_dual(const PairView& data, const SolverConfig& config) {
    data.validate();
    config.validate();
    const std::size_t n = data.size();

    LagrangianSolver solver(data);
    detail::BoundTracker bounds;
    Diagnostics diag;
    Vector lambda(n, 0.0), a(n), b(n), g(n), pa(n), pb(n);
    std::vector<char> link(n);
    double last_violation = std::numeric_limits<double>::infinity();
    double step_scale = config.step_constant;
    int stalls = 0;

    std::size_t k = 0;
    for (;; ++k) {
        const double q = solver.solve(lambda, a, b);
        double violation = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            g[j] = a[j] - b[j];
            violation = std::max(violation, g[j]);
        }
        last_violation = violation;
        // Polyak scale is halved after kMaxStalls iterations without a
        // sufficient rise of the best lower bound.
        const double previous_lower = bounds.lower;
        const double sufficient = 1e-3 * std::max(0.0, bounds.upper - bounds.lower);
        bounds.offer_dual(q, lambda);
        if (std::isfinite(previous_lower) && !(q > previous_lower + sufficient)) {
            if (++stalls > kMaxStalls) {
                step_scale *= 0.5;
                stalls = 0;
            }
        } else {
            stalls = 0;
        }

        // Two link rules: active multipliers or violated couplings, and
        // violated couplings alone. Both yield feasible pairs.
        for (std::size_t j = 0; j < n; ++j) link[j] = lambda[j] > 0.0 || a[j] >= b[j];
        bool jumped = detail::recover_from(data, a, b, link, solver, bounds, pa, pb);
        for (std::size_t j = 0; j < n; ++j) link[j] = a[j] >= b[j];
        jumped |= detail::recover_from(data, a, b, link, solver, bounds, pa, pb);

        diag.dual_values.push_back(q);
        diag.best_dual_values.push_back(bounds.lower);
        diag.feasibility.push_back(violation);
        diag.primal_bounds.push_back(bounds.upper);

        if (violation <= config.feas_tol && bounds.upper - bounds.lower <= config.gap_tol) {
            diag.converged = true;
            break;
        }
        if (k >= config.max_iter) break;

        if (jumped) {
            lambda = bounds.best_lambda;
            ++diag.certificate_jumps;
            continue;
        }

        double norm2 = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double pg = lambda[j] > 0.0 ? g[j] : std::max(g[j], 0.0);
            norm2 += pg * pg;
        }
        if (!(norm2 > 0.0)) {
            // stationary for the dual; the bounds decide convergence
            break;
        }
        double step = 0.0;
        if (config.step_rule == StepRule::Polyak) {
            const double floor = 1e-16 * std::max(1.0, std::abs(bounds.upper));
            step = step_scale * std::max(bounds.upper - q, floor) / norm2;
        } else {
            step = config.step_constant / (std::sqrt(static_cast<double>(k + 1)) * std::sqrt(norm2));
        }
        for (std::size_t j = 0; j < n; ++j) lambda[j] = std::max(0.0, lambda[j] + step * g[j]);
    }
    diag.iterations = k;

    // Pooling repair of the best dual iterate as a last candidate.
    {
        Vector ra(n), rb(n);
        solver.solve(bounds.best_lambda, ra, rb);
        repair_feasibility(data, ra, rb);
        bounds.offer_primal(data, ra, rb);
    }
    if (!diag.converged && bounds.upper - bounds.lower <= config.gap_tol && last_violation <= config.feas_tol) {
        diag.converged = true;
    }
    diag.gap = bounds.upper - bounds.lower;
    diag.final_violation = last_violation;

    DualSolution out;
    out.fit = PairFit::make(data, bounds.best_a, bounds.best_b, "dual-subgradient", diag.converged);
    out.dual.lambda = bounds.best_lambda;
    out.dual.iteration = k;
    {
        Vector la(n), lb(n);
        out.dual.dual_value = solver.solve(out.dual.lambda, la, lb);
        out.dual.subgradient.resize(n);
        for (std::size_t j = 0; j < n; ++j) out.dual.subgradient[j] = la[j] - lb[j];
    }
    if (config.oracle_check) {
        diag.oracle_certified =
            kkt_check(data, out.fit.a.values(), out.fit.b.values(), out.dual.lambda, 1e-6).ok();
    }
    out.diagnostics = std::move(diag);
    return out;
}

inline DualSolution solve_dual(const OrderedConeProblem& prob) {
    return solve_dual(prob.sample.view(), prob.config);
}

// ---------------------------------------------------------------------------
// Generalized PAVA projection

/// Weighted least squares projection of (u, v) onto
/// {(a, b) : a nondecreasing, b nondecreasing, a <= b}.
///
/// Alternates two pooling projections with Dykstra corrections: PAVA on both
/// rows, then pooling of each violated coupling to its weighted mean. The
/// coupling correction is nonzero exactly where pooling was needed, which is
/// used as the link pattern for level-set pooling of the current row fits;
/// once the pooled pair and its rebuilt multipliers close the gap to
/// gap_tol the pooled pair is returned. Otherwise the alternation runs until
/// its per-round displacement falls below feas_tol / 100.
inline PairFit project_ordered_pair(std::span<const double> u, std::span<const double> v,
                                    std::span<const double> w1, std::span<const double> w2,
                                    const SolverConfig& config) {
    const PairView data{u, v, w1, w2};
    data.validate();
    config.validate();
    const std::size_t n = data.size();

    LagrangianSolver solver(data);
    detail::BoundTracker bounds;
    PavaWorkspace pava;
    Vector a(u.begin(), u.end()), b(v.begin(), v.end());
    Vector row_a(n), row_b(n), ta(n), tb(n), start_a(n), start_b(n), pa(n), pb(n);
    Vector inc_rows_a(n, 0.0), inc_rows_b(n, 0.0), inc_cpl_a(n, 0.0), inc_cpl_b(n, 0.0);
    std::vector<char> link(n);
    const double disp_tol = config.feas_tol * 1e-2;
    double disp = std::numeric_limits<double>::infinity();
    bool settled = false;

    for (std::size_t round = 0; round < config.max_iter; ++round) {
        start_a = a;
        start_b = b;

        for (std::size_t j = 0; j < n; ++j) {
            ta[j] = a[j] + inc_rows_a[j];
            tb[j] = b[j] + inc_rows_b[j];
        }
        pava.solve(ta, w1, row_a);
        pava.solve(tb, w2, row_b);
        for (std::size_t j = 0; j < n; ++j) {
            inc_rows_a[j] = ta[j] - row_a[j];
            inc_rows_b[j] = tb[j] - row_b[j];
            ta[j] = row_a[j] + inc_cpl_a[j];
            tb[j] = row_b[j] + inc_cpl_b[j];
        }
        a = ta;
        b = tb;
        for (std::size_t j = 0; j < n; ++j) {
            if (a[j] > b[j]) {
                const double m = (w1[j] * a[j] + w2[j] * b[j]) / (w1[j] + w2[j]);
                a[j] = m;
                b[j] = m;
            }
            inc_cpl_a[j] = ta[j] - a[j];
            inc_cpl_b[j] = tb[j] - b[j];
        }

        disp = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            disp = std::max({disp, std::abs(a[j] - start_a[j]), std::abs(b[j] - start_b[j])});
        }

        const bool try_pool = round < 16 || round % 16 == 0 || disp <= disp_tol;
        if (try_pool) {
            for (std::size_t j = 0; j < n; ++j) {
                link[j] = inc_cpl_a[j] != 0.0 || row_a[j] >= row_b[j];
            }
            detail::recover_from(data, row_a, row_b, link, solver, bounds, pa, pb);
            if (bounds.upper - bounds.lower <= config.gap_tol) {
                settled = true;
                break;
            }
        }
        if (disp <= disp_tol) break;
    }

    if (settled) return PairFit::make(data, bounds.best_a, bounds.best_b, "generalized-pava", true);
    // The raw iterate satisfies the coupling exactly but the rows only up to
    // the displacement; fall back to the pooled pair if that is not enough.
    if (is_feasible(a, b, config.feas_tol)) {
        return PairFit::make(data, std::move(a), std::move(b), "generalized-pava", disp <= disp_tol);
    }
    return PairFit::make(data, bounds.best_a, bounds.best_b, "generalized-pava", false);
}

inline PairFit project_ordered_pair(const PairedSample& sample, const SolverConfig& config) {
    return project_ordered_pair(sample.y(), sample.z(), sample.w1(), sample.w2(), config);
}

} // namespace ordiso

#endif // ORDISO_ORDERED_HPP
