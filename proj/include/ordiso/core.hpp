#ifndef ORDISO_CORE_HPP
#define ORDISO_CORE_HPP

// Domain types shared by every solver: the paired sample, monotone fits,
// the weighted least squares objective and the feasibility predicate for
// the cone {(a, b) : a nondecreasing, b nondecreasing, a <= b}.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ordiso {

using Vector = std::vector<double>;

/// Raised when two inputs that must share a length do not.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised for values outside the admissible domain (nonpositive weights,
/// non-finite data, empty samples, bad tolerances).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

namespace detail {

inline void require_same_length(std::size_t lhs, std::size_t rhs, const char* what) {
    if (lhs != rhs) {
        throw DimensionError(std::string(what) + ": length " + std::to_string(lhs) +
                             " does not match " + std::to_string(rhs));
    }
}

inline void require_positive_weights(std::span<const double> w, const char* what) {
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (!(w[j] > 0.0) || !std::isfinite(w[j])) {
            throw DomainError(std::string(what) + ": weight at index " + std::to_string(j) +
                              " must be positive and finite");
        }
    }
}

inline void require_finite(std::span<const double> v, const char* what) {
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (!std::isfinite(v[j])) {
            throw DomainError(std::string(what) + ": non-finite value at index " + std::to_string(j));
        }
    }
}

// Neumaier compensated summation; objective values feed absolute gap tests
// that sit close to double precision for large n.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    [[nodiscard]] double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace detail

/// Non-owning view of the data entering the paired criterion. Both
/// solvers and oracles operate on this, so a projection of (u, v) and a
/// fit of (y, z) share code paths.
struct PairView {
    std::span<const double> y;
    std::span<const double> z;
    std::span<const double> w1;
    std::span<const double> w2;

    [[nodiscard]] std::size_t size() const { return y.size(); }

    void validate() const {
        detail::require_same_length(z.size(), y.size(), "z");
        detail::require_same_length(w1.size(), y.size(), "w1");
        detail::require_same_length(w2.size(), y.size(), "w2");
        if (y.empty()) throw DomainError("sample must contain at least one point");
        detail::require_finite(y, "y");
        detail::require_finite(z, "z");
        detail::require_positive_weights(w1, "w1");
        detail::require_positive_weights(w2, "w2");
    }
};

/// Design points with two response curves and their weights.
class PairedSample {
public:
    PairedSample(Vector x, Vector y, Vector z, Vector w1, Vector w2)
        : x_(std::move(x)), y_(std::move(y)), z_(std::move(z)), w1_(std::move(w1)), w2_(std::move(w2)) {
        detail::require_same_length(y_.size(), x_.size(), "y");
        view().validate();
        detail::require_finite(x_, "x");
        for (std::size_t j = 1; j < x_.size(); ++j) {
            if (!(x_[j - 1] < x_[j])) {
                throw DomainError("design points must be strictly increasing (index " +
                                  std::to_string(j) + ")");
            }
        }
    }

    /// Unit weights and design points 1..n.
    static PairedSample unweighted(Vector y, Vector z) {
        const std::size_t n = y.size();
        Vector x(n);
        for (std::size_t j = 0; j < n; ++j) x[j] = static_cast<double>(j + 1);
        return {std::move(x), std::move(y), std::move(z), Vector(n, 1.0), Vector(n, 1.0)};
    }

    static PairedSample with_weights(Vector y, Vector z, Vector w1, Vector w2) {
        const std::size_t n = y.size();
        Vector x(n);
        for (std::size_t j = 0; j < n; ++j) x[j] = static_cast<double>(j + 1);
        return {std::move(x), std::move(y), std::move(z), std::move(w1), std::move(w2)};
    }

    [[nodiscard]] std::size_t size() const { return x_.size(); }
    [[nodiscard]] const Vector& x() const { return x_; }
    [[nodiscard]] const Vector& y() const { return y_; }
    [[nodiscard]] const Vector& z() const { return z_; }
    [[nodiscard]] const Vector& w1() const { return w1_; }
    [[nodiscard]] const Vector& w2() const { return w2_; }
    [[nodiscard]] PairView view() const { return {y_, z_, w1_, w2_}; }

private:
    Vector x_, y_, z_, w1_, w2_;
};

/// Half-open index range [begin, end) on which a fit is constant.
struct Block {
    std::size_t begin = 0;
    std::size_t end = 0;
    friend bool operator==(const Block&, const Block&) = default;
};

/// Partition of a nondecreasing vector into its maximal constant runs.
inline std::vector<Block> level_blocks(std::span<const double> values) {
    std::vector<Block> blocks;
    std::size_t start = 0;
    for (std::size_t j = 1; j <= values.size(); ++j) {
        if (j == values.size() || values[j] != values[start]) {
            blocks.push_back({start, j});
            start = j;
        }
    }
    return blocks;
}

/// A single nondecreasing fitted vector together with its level sets.
class MonotoneFit {
public:
    MonotoneFit() = default;
    explicit MonotoneFit(Vector values) : values_(std::move(values)), blocks_(level_blocks(values_)) {}

    [[nodiscard]] const Vector& values() const { return values_; }
    [[nodiscard]] const std::vector<Block>& blocks() const { return blocks_; }
    [[nodiscard]] std::size_t size() const { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t j) const { return values_[j]; }

    [[nodiscard]] bool is_nondecreasing() const {
        for (std::size_t j = 1; j < values_.size(); ++j) {
            if (values_[j - 1] > values_[j]) return false;
        }
        return true;
    }

private:
    Vector values_;
    std::vector<Block> blocks_;
};

/// L2(a, b) = sum_j w1_j (y_j - a_j)^2 + sum_j w2_j (z_j - b_j)^2.
inline double objective(const PairView& data, std::span<const double> a, std::span<const double> b) {
    detail::require_same_length(a.size(), data.size(), "a");
    detail::require_same_length(b.size(), data.size(), "b");
    detail::CompensatedSum sum;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double ra = data.y[j] - a[j];
        const double rb = data.z[j] - b[j];
        sum.add(data.w1[j] * ra * ra);
        sum.add(data.w2[j] * rb * rb);
    }
    return sum.value();
}

inline double objective(const PairedSample& sample, std::span<const double> a, std::span<const double> b) {
    return objective(sample.view(), a, b);
}

/// max_j (a_j - b_j); negative when every coupling has slack.
inline double max_coupling_violation(std::span<const double> a, std::span<const double> b) {
    detail::require_same_length(b.size(), a.size(), "b");
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, a[j] - b[j]);
    return worst;
}

inline bool is_feasible(std::span<const double> a, std::span<const double> b, double tol) {
    detail::require_same_length(b.size(), a.size(), "b");
    if (tol < 0.0) throw DomainError("feasibility tolerance must be nonnegative");
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j] > b[j] + tol) return false;
        if (j + 1 < a.size() && (a[j] > a[j + 1] + tol || b[j] > b[j + 1] + tol)) return false;
    }
    return true;
}

/// The constrained pair (a, b) with its objective value.
struct PairFit {
    MonotoneFit a;
    MonotoneFit b;
    double objective = 0.0;
    double max_coupling_violation = 0.0;
    std::string solver_tag;
    bool converged = true;

    static PairFit make(const PairView& data, Vector a, Vector b, std::string tag, bool converged = true) {
        PairFit fit;
        fit.objective = ordiso::objective(data, a, b);
        fit.max_coupling_violation = ordiso::max_coupling_violation(a, b);
        fit.a = MonotoneFit(std::move(a));
        fit.b = MonotoneFit(std::move(b));
        fit.solver_tag = std::move(tag);
        fit.converged = converged;
        return fit;
    }
};

/// Multipliers of the coupling constraints a_j <= b_j.
struct DualState {
    Vector lambda;
    double dual_value = -std::numeric_limits<double>::infinity();
    Vector subgradient;
    std::size_t iteration = 0;
};

enum class StepRule { Polyak, Diminishing };

inline const char* to_string(StepRule rule) {
    return rule == StepRule::Polyak ? "polyak" : "diminishing";
}

struct SolverConfig {
    double feas_tol = 1e-8;
    double gap_tol = 1e-8;
    std::size_t max_iter = 100000;
    StepRule step_rule = StepRule::Polyak;
    double step_constant = 1.0;
    bool oracle_check = false;

    void validate() const {
        if (!(feas_tol > 0.0) || !(gap_tol > 0.0)) throw DomainError("tolerances must be strictly positive");
        if (max_iter < 1) throw DomainError("max_iter must be at least 1");
        if (!(step_constant > 0.0)) throw DomainError("step constant must be positive");
    }
};

} // namespace ordiso

#endif // ORDISO_CORE_HPP
