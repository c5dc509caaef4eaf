#ifndef ORDISO_CLI_HPP
#define ORDISO_CLI_HPP

// Subcommand bodies for the `ordiso` tool. Argument parsing lives in
// tools/ordiso.cpp; everything here works on streams so it can be driven
// from tests.
//
// Exit codes: 0 success, 1 input error, 2 solver did not converge,
// 3 certificate check failed.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <exception>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ordiso/core.hpp"
#include "ordiso/io.hpp"
#include "ordiso/oracle.hpp"
#include "ordiso/ordered.hpp"
#include "ordiso/pava.hpp"
#include "ordiso/simulate.hpp"

namespace ordiso::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kNotConverged = 2, kCheckFailed = 3 };

enum class Method { Dual, Pava, Dykstra };

inline Method parse_method(const std::string& name) {
    if (name == "dual") return Method::Dual;
    if (name == "pava") return Method::Pava;
    if (name == "dykstra") return Method::Dykstra;
    throw DomainError("unknown method '" + name + "'");
}

inline StepRule parse_step_rule(const std::string& name) {
    if (name == "polyak") return StepRule::Polyak;
    if (name == "diminishing") return StepRule::Diminishing;
    throw DomainError("unknown step rule '" + name + "'");
}

inline io::OutputFormat parse_format(const std::string& name) {
    if (name == "json") return io::OutputFormat::Json;
    if (name == "csv") return io::OutputFormat::Csv;
    if (name == "plotcsv") return io::OutputFormat::PlotCsv;
    throw DomainError("unknown output format '" + name + "'");
}

struct FitOutcome {
    io::FitRecord record;
    Diagnostics diagnostics;
};

/// Runs the selected solver and packages the result with multipliers that
/// certify it.
inline FitOutcome fit_sample(const PairedSample& sample, Method method, const SolverConfig& config) {
    config.validate();
    const PairView data = sample.view();
    FitOutcome out{io::FitRecord{sample, {}, {}}, {}};
    auto& rec = out.record;
    rec.feas_tol = config.feas_tol;
    rec.gap_tol = config.gap_tol;

    switch (method) {
    case Method::Dual: {
        DualSolution sol = solve_dual(data, config);
        rec.fit = std::move(sol.fit);
        rec.dual = std::move(sol.dual);
        rec.iterations = sol.diagnostics.iterations;
        out.diagnostics = std::move(sol.diagnostics);
        break;
    }
    case Method::Pava: {
        rec.fit = project_ordered_pair(sample, config);
        LagrangianSolver solver(data);
        Certificate cert = certify(data, rec.fit.a.values(), rec.fit.b.values(), solver);
        rec.dual.lambda = std::move(cert.lambda);
        rec.dual.dual_value = cert.dual_value;
        out.diagnostics.converged = rec.fit.converged;
        out.diagnostics.gap = rec.fit.objective - cert.dual_value;
        out.diagnostics.final_violation = rec.fit.max_coupling_violation;
        break;
    }
    case Method::Dykstra: {
        oracle::DykstraState state(sample.y(), sample.z());
        rec.fit = oracle::dykstra_project(sample.y(), sample.z(), sample.w1(), sample.w2(), config.feas_tol * 1e-2,
                                          config.max_iter, &state);
        // The coupling-set correction is lambda / (2 w1) at the fixed point.
        rec.dual.lambda.resize(sample.size());
        for (std::size_t j = 0; j < sample.size(); ++j) {
            rec.dual.lambda[j] = std::max(0.0, 2.0 * sample.w1()[j] * state.inc_a[2][j]);
        }
        rec.dual.dual_value = dual_value(data, rec.dual.lambda);
        rec.dual.iteration = state.round;
        rec.iterations = state.round;
        out.diagnostics.converged = rec.fit.converged;
        out.diagnostics.iterations = state.round;
        out.diagnostics.gap = rec.fit.objective - rec.dual.dual_value;
        out.diagnostics.final_violation = rec.fit.max_coupling_violation;
        break;
    }
    }
    rec.fit.converged = out.diagnostics.converged;
    return out;
}

struct FitOptions {
    Method method = Method::Dual;
    SolverConfig config;
    io::OutputFormat format = io::OutputFormat::Json;
};

inline int cmd_fit(const FitOptions& opts, std::istream& in, std::ostream& out, std::ostream& err) {
    std::optional<PairedSample> sample;
    try {
        sample = io::read_sample(in);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    const FitOutcome res = fit_sample(*sample, opts.method, opts.config);
    io::write_fit(res.record, &res.diagnostics, out, opts.format);
    err << "n=" << sample->size() << " objective=" << io::detail::format_double(res.record.fit.objective)
        << " iterations=" << res.record.iterations
        << " max_coupling_violation=" << io::detail::format_double(res.record.fit.max_coupling_violation)
        << " solver=" << res.record.fit.solver_tag << (res.record.fit.converged ? "" : " NOT-CONVERGED") << '\n';
    return res.record.fit.converged ? kOk : kNotConverged;
}

/// Re-certifies a fit record: KKT conditions at the stored tolerance and the
/// stored objective against a recomputation.
inline int cmd_check(std::istream& in, std::ostream& out, std::ostream& err) {
    std::optional<io::FitRecord> parsed;
    try {
        parsed = io::read_fit(in);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    const io::FitRecord& rec = *parsed;
    const KktReport report =
        kkt_check(rec.sample.view(), rec.fit.a.values(), rec.fit.b.values(), rec.dual.lambda, rec.kkt_tol);
    const double recomputed = objective(rec.sample, rec.fit.a.values(), rec.fit.b.values());
    const double objective_error = std::abs(recomputed - rec.fit.objective);
    const bool objective_ok = objective_error <= 1e-12 * std::max(1.0, std::abs(recomputed));

    if (report.ok() && objective_ok) {
        out << "certificate ok: n=" << rec.sample.size() << " objective=" << io::detail::format_double(recomputed)
            << " tol=" << io::detail::format_double(rec.kkt_tol) << '\n';
        return kOk;
    }
    out << "certificate FAILED\n" << report.describe();
    if (!objective_ok) {
        out << "objective mismatch: stored " << io::detail::format_double(rec.fit.objective) << ", recomputed "
            << io::detail::format_double(recomputed) << '\n';
    }
    return kCheckFailed;
}

struct SimulateOptions {
    std::size_t n = 200;
    double sd = 0.5;
    simulate::Family family = simulate::Family::Logistic;
    std::uint64_t seed = simulate::kDefaultSeed;
};

inline int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
    (void)err;
    io::write_sample(simulate::draw(opts.n, opts.sd, opts.family, opts.seed), out);
    return kOk;
}

struct BenchOptions {
    std::vector<std::size_t> sizes{100, 1000, 10000};
    std::size_t reps = 3;
    std::uint64_t seed = simulate::kDefaultSeed;
    SolverConfig config;
    /// Dykstra is only timed up to this size.
    std::size_t dykstra_max_n = 1000;
};

struct BenchRow {
    std::string solver;
    std::size_t n = 0;
    std::size_t reps = 0;
    double median_seconds = 0.0;
    double median_iterations = 0.0;
    bool all_converged = true;
};

namespace detail {

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

} // namespace detail

inline std::vector<BenchRow> run_bench(const BenchOptions& opts) {
    if (opts.reps < 1) throw DomainError("reps must be at least 1");
    using Clock = std::chrono::steady_clock;
    std::vector<BenchRow> rows;
    for (const std::size_t n : opts.sizes) {
        if (n < 1) throw DomainError("sizes must be positive");
        const char* solvers[] = {"pava", "dual", "generalized-pava", "dykstra"};
        for (const std::string solver : solvers) {
            if (solver == "dykstra" && n > opts.dykstra_max_n) continue;
            BenchRow row{solver, n, opts.reps};
            std::vector<double> times, iters;
            for (std::size_t r = 0; r < opts.reps; ++r) {
                const PairedSample s = simulate::draw(n, 0.5, simulate::Family::Logistic, opts.seed + r);
                const auto t0 = Clock::now();
                double it = 0.0;
                bool ok = true;
                if (solver == "pava") {
                    const MonotoneFit m = isotonic_fit(s.y(), s.w1());
                    it = 1.0;
                    ok = m.size() == n;
                } else if (solver == "dual") {
                    const DualSolution d = solve_dual(s.view(), opts.config);
                    it = static_cast<double>(d.diagnostics.iterations);
                    ok = d.diagnostics.converged;
                } else if (solver == "generalized-pava") {
                    ok = project_ordered_pair(s, opts.config).converged;
                } else {
                    oracle::DykstraState st(s.y(), s.z());
                    ok = oracle::dykstra_project(s.y(), s.z(), s.w1(), s.w2(), opts.config.feas_tol * 1e-2,
                                                 opts.config.max_iter, &st)
                             .converged;
                    it = static_cast<double>(st.round);
                }
                times.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
                iters.push_back(it);
                row.all_converged = row.all_converged && ok;
            }
            row.median_seconds = detail::median(times);
            row.median_iterations = detail::median(iters);
            rows.push_back(row);
        }
    }
    return rows;
}

inline int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err) {
    (void)err;
    out << "solver,n,reps,median_seconds,median_iterations,all_converged\n";
    for (const BenchRow& r : run_bench(opts)) {
        out << r.solver << ',' << r.n << ',' << r.reps << ',' << io::detail::format_double(r.median_seconds) << ','
            << io::detail::format_double(r.median_iterations) << ',' << (r.all_converged ? "true" : "false") << '\n';
    }
    return kOk;
}

} // namespace ordiso::cli

#endif // ORDISO_CLI_HPP
