#ifndef ORDISO_PAVA_HPP
#define ORDISO_PAVA_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ordiso/core.hpp"

namespace ordiso {

/// Weighted isotonic regression of a single curve.
struct IsotonicProblem {
    std::span<const double> data;
    std::span<const double> weights;

    void validate() const {
        detail::require_same_length(weights.size(), data.size(), "weights");
        detail::require_positive_weights(weights, "weights");
    }
};

/// Reusable block stack for the pool-adjacent-violators pass. Solvers that
/// call PAVA once per iteration keep one of these around to avoid
/// reallocating.
class PavaWorkspace {
public:
    // Single forward pass; a new point is pooled backwards while the block
    // below it has a value >= its own. Pooled values are updated as
    // v_prev + (v_top - v_prev) * w_top / (w_prev + w_top), so pooling equal
    // values is exact and already-monotone input is returned bit-for-bit.
    void solve(std::span<const double> data, std::span<const double> weights, std::span<double> out) {
        const std::size_t n = data.size();
        value_.clear();
        weight_.clear();
        begin_.clear();
        for (std::size_t j = 0; j < n; ++j) {
            double v = data[j];
            double w = weights[j];
            std::size_t start = j;
            while (!value_.empty() && value_.back() >= v) {
                const double pw = weight_.back();
                const double total = pw + w;
                v = value_.back() + (v - value_.back()) * (w / total);
                w = total;
                start = begin_.back();
                value_.pop_back();
                weight_.pop_back();
                begin_.pop_back();
            }
            value_.push_back(v);
            weight_.push_back(w);
            begin_.push_back(start);
        }
        for (std::size_t k = 0; k < value_.size(); ++k) {
            const std::size_t stop = k + 1 < begin_.size() ? begin_[k + 1] : n;
            for (std::size_t j = begin_[k]; j < stop; ++j) out[j] = value_[k];
        }
    }

    [[nodiscard]] std::size_t block_count() const { return value_.size(); }

private:
    std::vector<double> value_;
    std::vector<double> weight_;
    std::vector<std::size_t> begin_;
};

inline MonotoneFit isotonic_fit(const IsotonicProblem& p) {
    p.validate();
    Vector out(p.data.size());
    PavaWorkspace ws;
    ws.solve(p.data, p.weights, out);
    return MonotoneFit(std::move(out));
}

inline MonotoneFit isotonic_fit(std::span<const double> data, std::span<const double> weights) {
    return isotonic_fit(IsotonicProblem{data, weights});
}

struct GcmViolation {
    enum class Kind {
        NotMonotone,        // m_k > m_{k+1} + tol
        NegativeCumulative, // C_k < -tol
        NonzeroTotal,       // |C_n| > tol
        NonzeroAtBreak,     // |C_k| > tol where m_k < m_{k+1}
    };
    Kind kind;
    std::size_t index;
    double magnitude;
};

inline const char* to_string(GcmViolation::Kind kind) {
    switch (kind) {
    case GcmViolation::Kind::NotMonotone: return "not-monotone";
    case GcmViolation::Kind::NegativeCumulative: return "negative-cumulative-residual";
    case GcmViolation::Kind::NonzeroTotal: return "nonzero-total-residual";
    case GcmViolation::Kind::NonzeroAtBreak: return "nonzero-residual-at-block-break";
    }
    return "unknown";
}

struct GcmReport {
    std::vector<GcmViolation> violations;
    std::vector<double> cumulative; // C_1..C_n

    [[nodiscard]] bool ok() const { return violations.empty(); }
    explicit operator bool() const { return ok(); }
};

/// Optimality conditions of the isotonic fit in cumulative-sum form. With
/// C_k = sum_{j<=k} w_j (data_j - m_j), m is the weighted isotonic
/// regression of data iff m is nondecreasing, every C_k >= 0, C_n = 0, and
/// C_k = 0 wherever m steps up after k. Steps no larger than tol are treated
/// as ties, so fits whose levels differ by rounding are judged as one block.
inline GcmReport gcm_check(const IsotonicProblem& p, std::span<const double> m, double tol) {
    detail::require_same_length(p.weights.size(), p.data.size(), "weights");
    detail::require_same_length(m.size(), p.data.size(), "fit");
    if (!(tol > 0.0)) throw DomainError("gcm_check tolerance must be positive");

    GcmReport report;
    const std::size_t n = m.size();
    report.cumulative.resize(n);
    detail::CompensatedSum c;
    for (std::size_t k = 0; k < n; ++k) {
        c.add(p.weights[k] * (p.data[k] - m[k]));
        const double ck = c.value();
        report.cumulative[k] = ck;
        if (k + 1 < n && m[k] > m[k + 1] + tol) {
            report.violations.push_back({GcmViolation::Kind::NotMonotone, k, m[k] - m[k + 1]});
        }
        if (ck < -tol) {
            report.violations.push_back({GcmViolation::Kind::NegativeCumulative, k, -ck});
        }
        if (k + 1 == n) {
            if (std::abs(ck) > tol) report.violations.push_back({GcmViolation::Kind::NonzeroTotal, k, std::abs(ck)});
        } else if (m[k + 1] - m[k] > tol && std::abs(ck) > tol) {
            report.violations.push_back({GcmViolation::Kind::NonzeroAtBreak, k, std::abs(ck)});
        }
    }
    return report;
}

inline std::string describe(const GcmReport& report) {
    std::string out;
    for (const auto& v : report.violations) {
        out += std::string(to_string(v.kind)) + " at index " + std::to_string(v.index) +
               " (magnitude " + std::to_string(v.magnitude) + ")\n";
    }
    return out;
}

} // namespace ordiso

#endif // ORDISO_PAVA_HPP
