#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "ordiso/cli.hpp"

namespace {

using namespace ordiso;

// "-" means stdin/stdout.
struct Streams {
    std::unique_ptr<std::ifstream> in_file;
    std::unique_ptr<std::ofstream> out_file;
    std::istream* in = &std::cin;
    std::ostream* out = &std::cout;

    bool open(const std::string& input, const std::string& output) {
        if (input != "-") {
            in_file = std::make_unique<std::ifstream>(input);
            if (!*in_file) {
                std::cerr << "error: cannot open input '" << input << "'\n";
                return false;
            }
            in = in_file.get();
        }
        if (output != "-") {
            out_file = std::make_unique<std::ofstream>(output);
            if (!*out_file) {
                std::cerr << "error: cannot open output '" << output << "'\n";
                return false;
            }
            out = out_file.get();
        }
        return true;
    }
};

void add_solver_flags(CLI::App* cmd, SolverConfig& config, std::string& step_rule) {
    cmd->add_option("--feas-tol", config.feas_tol, "feasibility tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--gap-tol", config.gap_tol, "duality gap tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", config.max_iter, "iteration cap")->check(CLI::PositiveNumber);
    cmd->add_option("--step-rule", step_rule, "polyak | diminishing")
        ->check(CLI::IsMember({"polyak", "diminishing"}));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Least squares fits of two ordered nondecreasing regression curves"};
    app.require_subcommand(1);

    std::string input = "-";
    std::string output = "-";
    std::string method = "dual";
    std::string format = "json";
    std::string step_rule = "polyak";
    std::string family = "logistic";

    cli::FitOptions fit_opts;
    auto* fit = app.add_subcommand("fit", "fit a CSV sample (x,y,z[,w1][,w2])");
    fit->add_option("input", input, "input CSV, '-' for stdin");
    fit->add_option("-o,--output", output, "output path, '-' for stdout");
    fit->add_option("--method", method, "dual | pava | dykstra")->check(CLI::IsMember({"dual", "pava", "dykstra"}));
    fit->add_option("--format", format, "json | csv | plotcsv")->check(CLI::IsMember({"json", "csv", "plotcsv"}));
    add_solver_flags(fit, fit_opts.config, step_rule);

    auto* check = app.add_subcommand("check", "re-certify a JSON fit record");
    check->add_option("input", input, "fit record, '-' for stdin");

    cli::SimulateOptions sim_opts;
    auto* sim = app.add_subcommand("simulate", "emit a synthetic CSV sample");
    sim->add_option("--n", sim_opts.n, "number of design points")->check(CLI::PositiveNumber);
    sim->add_option("--sd", sim_opts.sd, "noise standard deviation");
    sim->add_option("--seed", sim_opts.seed, "random seed");
    sim->add_option("--family", family, "affine | piecewise | logistic")
        ->check(CLI::IsMember({"affine", "piecewise", "logistic", "logistic-like"}));
    sim->add_option("-o,--output", output, "output path, '-' for stdout");

    cli::BenchOptions bench_opts;
    auto* bench = app.add_subcommand("bench", "time the solvers on simulated samples");
    bench->add_option("--sizes", bench_opts.sizes, "sample sizes")->delimiter(',');
    bench->add_option("--reps", bench_opts.reps, "repetitions per size")->check(CLI::PositiveNumber);
    bench->add_option("--seed", bench_opts.seed, "random seed");
    bench->add_option("-o,--output", output, "output path, '-' for stdout");
    add_solver_flags(bench, bench_opts.config, step_rule);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : cli::kInputError;
    }

    try {
        Streams io;
        if (!io.open(input, output)) return cli::kInputError;
        if (fit->parsed()) {
            fit_opts.method = cli::parse_method(method);
            fit_opts.format = cli::parse_format(format);
            fit_opts.config.step_rule = cli::parse_step_rule(step_rule);
            return cli::cmd_fit(fit_opts, *io.in, *io.out, std::cerr);
        }
        if (check->parsed()) return cli::cmd_check(*io.in, *io.out, std::cerr);
        if (sim->parsed()) {
            if (sim_opts.sd < 0.0) {
                std::cerr << "error: --sd must be nonnegative\n";
                return cli::kInputError;
            }
            sim_opts.family = simulate::parse_family(family);
            return cli::cmd_simulate(sim_opts, *io.out, std::cerr);
        }
        bench_opts.config.step_rule = cli::parse_step_rule(step_rule);
        return cli::cmd_bench(bench_opts, *io.out, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kInputError;
    }
}
