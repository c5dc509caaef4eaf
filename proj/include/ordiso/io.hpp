#ifndef ORDISO_IO_HPP
#define ORDISO_IO_HPP

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ordiso/core.hpp"
#include "ordiso/ordered.hpp"

namespace ordiso::io {

inline constexpr const char* kFitSchema = "fit-result-v1";
/// Tolerance at which fit records are certified by `check`.
inline constexpr double kDefaultKktTol = 1e-6;

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct RawRecord {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double w1 = 1.0;
    double w2 = 1.0;
};

enum class InputFormat { Csv };
enum class OutputFormat { Json, Csv, PlotCsv };

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    for (;;) {
        const auto comma = line.find(',');
        cells.push_back(trim(line.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        line.remove_prefix(comma + 1);
    }
    return cells;
}

inline double parse_number(std::string_view cell, std::size_t line, std::string_view column) {
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || cell.empty()) {
        throw ParseError(line, "column '" + std::string(column) + "': cannot parse '" + std::string(cell) +
                                   "' as a number");
    }
    if (!std::isfinite(value)) {
        throw ParseError(line, "column '" + std::string(column) + "': value must be finite");
    }
    return value;
}

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

/// Sorts records by x and merges records sharing an x value: y and z become
/// the w1- and w2-weighted means, the weights are summed.
inline PairedSample merge_ties(std::vector<RawRecord> records) {
    if (records.empty()) throw DomainError("no data rows");
    std::stable_sort(records.begin(), records.end(),
                     [](const RawRecord& l, const RawRecord& r) { return l.x < r.x; });
    Vector x, y, z, w1, w2;
    for (std::size_t i = 0; i < records.size();) {
        std::size_t k = i;
        double sy = 0.0, sz = 0.0, s1 = 0.0, s2 = 0.0;
        while (k < records.size() && records[k].x == records[i].x) {
            sy += records[k].w1 * records[k].y;
            sz += records[k].w2 * records[k].z;
            s1 += records[k].w1;
            s2 += records[k].w2;
            ++k;
        }
        x.push_back(records[i].x);
        if (k - i == 1) {
            y.push_back(records[i].y);
            z.push_back(records[i].z);
        } else {
            y.push_back(sy / s1);
            z.push_back(sz / s2);
        }
        w1.push_back(s1);
        w2.push_back(s2);
        i = k;
    }
    return {std::move(x), std::move(y), std::move(z), std::move(w1), std::move(w2)};
}

/// Reads `x,y,z[,w1][,w2]` CSV (header required, columns in any order).
inline std::vector<RawRecord> read_records(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::optional<std::vector<std::string>> header;
    int col_x = -1, col_y = -1, col_z = -1, col_w1 = -1, col_w2 = -1;
    std::vector<RawRecord> records;

    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view = detail::trim(line);
        if (lineno == 1 && view.substr(0, 3) == "\xEF\xBB\xBF") view.remove_prefix(3);
        if (view.empty()) continue;
        const auto cells = detail::split(view);
        if (!header) {
            header.emplace();
            for (std::size_t c = 0; c < cells.size(); ++c) {
                const std::string name(cells[c]);
                int* slot = name == "x"    ? &col_x
                            : name == "y"  ? &col_y
                            : name == "z"  ? &col_z
                            : name == "w1" ? &col_w1
                            : name == "w2" ? &col_w2
                                           : nullptr;
                if (!slot) throw ParseError(lineno, "unknown column '" + name + "'");
                if (*slot >= 0) throw ParseError(lineno, "duplicate column '" + name + "'");
                *slot = static_cast<int>(c);
                header->push_back(name);
            }
            if (col_x < 0 || col_y < 0 || col_z < 0) {
                throw ParseError(lineno, "header must contain x, y and z");
            }
            continue;
        }
        if (cells.size() != header->size()) {
            throw ParseError(lineno, "expected " + std::to_string(header->size()) + " fields, found " +
                                         std::to_string(cells.size()));
        }
        RawRecord rec;
        rec.x = detail::parse_number(cells[col_x], lineno, "x");
        rec.y = detail::parse_number(cells[col_y], lineno, "y");
        rec.z = detail::parse_number(cells[col_z], lineno, "z");
        if (col_w1 >= 0) rec.w1 = detail::parse_number(cells[col_w1], lineno, "w1");
        if (col_w2 >= 0) rec.w2 = detail::parse_number(cells[col_w2], lineno, "w2");
        if (!(rec.w1 > 0.0) || !(rec.w2 > 0.0)) {
            throw DomainError("line " + std::to_string(lineno) + ": weights must be positive");
        }
        records.push_back(rec);
    }
    if (!header) throw DomainError("empty input");
    if (records.empty()) throw DomainError("input has a header but no data rows");
    return records;
}

inline PairedSample read_sample(std::istream& in, InputFormat format = InputFormat::Csv) {
    (void)format; // CSV is the only input format
    return merge_ties(read_records(in));
}

/// Writes a sample back out as CSV with explicit weights.
inline void write_sample(const PairedSample& s, std::ostream& out) {
    out << "x,y,z,w1,w2\n";
    for (std::size_t j = 0; j < s.size(); ++j) {
        out << detail::format_double(s.x()[j]) << ',' << detail::format_double(s.y()[j]) << ','
            << detail::format_double(s.z()[j]) << ',' << detail::format_double(s.w1()[j]) << ','
            << detail::format_double(s.w2()[j]) << '\n';
    }
}

/// Everything a fit file records; `check` re-certifies from this alone.
struct FitRecord {
    PairedSample sample;
    PairFit fit;
    DualState dual;
    double feas_tol = 1e-8;
    double gap_tol = 1e-8;
    double kkt_tol = kDefaultKktTol;
    std::size_t iterations = 0;
};

inline nlohmann::json to_json(const FitRecord& r, const Diagnostics* diag = nullptr) {
    nlohmann::json j;
    j["schema"] = kFitSchema;
    j["n"] = r.sample.size();
    j["input"] = {{"x", r.sample.x()}, {"y", r.sample.y()}, {"z", r.sample.z()},
                  {"w1", r.sample.w1()}, {"w2", r.sample.w2()}};
    j["fit"] = {{"a", r.fit.a.values()},
                {"b", r.fit.b.values()},
                {"objective", r.fit.objective},
                {"max_coupling_violation", r.fit.max_coupling_violation},
                {"solver_tag", r.fit.solver_tag},
                {"converged", r.fit.converged}};
    j["dual"] = {{"lambda", r.dual.lambda}, {"dual_value", r.dual.dual_value}, {"iteration", r.dual.iteration}};
    j["iterations"] = r.iterations;
    j["tolerances"] = {{"feas_tol", r.feas_tol}, {"gap_tol", r.gap_tol}, {"kkt_tol", r.kkt_tol}};
    if (diag) {
        j["diagnostics"] = {{"gap", diag->gap},
                            {"final_violation", diag->final_violation},
                            {"certificate_jumps", diag->certificate_jumps},
                            {"dual_values", diag->dual_values},
                            {"feasibility", diag->feasibility}};
    }
    return j;
}

inline FitRecord from_json(const nlohmann::json& j) {
    if (j.value("schema", std::string{}) != kFitSchema) {
        throw DomainError(std::string("fit record schema must be ") + kFitSchema);
    }
    const auto& in = j.at("input");
    PairedSample sample(in.at("x").get<Vector>(), in.at("y").get<Vector>(), in.at("z").get<Vector>(),
                        in.at("w1").get<Vector>(), in.at("w2").get<Vector>());
    const auto& f = j.at("fit");
    Vector a = f.at("a").get<Vector>();
    Vector b = f.at("b").get<Vector>();
    ordiso::detail::require_same_length(a.size(), sample.size(), "a");
    ordiso::detail::require_same_length(b.size(), sample.size(), "b");
    PairFit fit = PairFit::make(sample.view(), std::move(a), std::move(b), f.at("solver_tag").get<std::string>(),
                                f.at("converged").get<bool>());
    // keep what the file claims so that check can compare it
    fit.objective = f.at("objective").get<double>();
    fit.max_coupling_violation = f.at("max_coupling_violation").get<double>();

    DualState dual;
    const auto& d = j.at("dual");
    dual.lambda = d.at("lambda").get<Vector>();
    ordiso::detail::require_same_length(dual.lambda.size(), sample.size(), "lambda");
    if (!d.at("dual_value").is_null()) dual.dual_value = d.at("dual_value").get<double>();
    dual.iteration = d.value("iteration", std::size_t{0});

    FitRecord r{std::move(sample), std::move(fit), std::move(dual)};
    const auto& t = j.at("tolerances");
    r.feas_tol = t.at("feas_tol").get<double>();
    r.gap_tol = t.at("gap_tol").get<double>();
    r.kkt_tol = t.value("kkt_tol", kDefaultKktTol);
    r.iterations = j.value("iterations", std::size_t{0});
    return r;
}

inline FitRecord read_fit(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(0, std::string("invalid JSON: ") + e.what());
    }
    try {
        return from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed fit record: ") + e.what());
    }
}

/// Step-function coordinates: every constant block of a and of b is emitted
/// as two points, at the first and last design point of the block.
inline void write_plot_csv(const PairedSample& sample, const PairFit& fit, std::ostream& out) {
    out << "curve,x,value\n";
    auto emit = [&](const char* curve, const MonotoneFit& m) {
        for (const Block& blk : m.blocks()) {
            const std::string v = detail::format_double(m[blk.begin]);
            out << curve << ',' << detail::format_double(sample.x()[blk.begin]) << ',' << v << '\n';
            out << curve << ',' << detail::format_double(sample.x()[blk.end - 1]) << ',' << v << '\n';
        }
    };
    emit("a", fit.a);
    emit("b", fit.b);
}

inline void write_fit(const FitRecord& record, const Diagnostics* diag, std::ostream& out, OutputFormat format) {
    switch (format) {
    case OutputFormat::Json:
        out << to_json(record, diag).dump(2) << '\n';
        break;
    case OutputFormat::Csv:
        out << "x,a,b\n";
        for (std::size_t j = 0; j < record.sample.size(); ++j) {
            out << detail::format_double(record.sample.x()[j]) << ',' << detail::format_double(record.fit.a[j])
                << ',' << detail::format_double(record.fit.b[j]) << '\n';
        }
        break;
    case OutputFormat::PlotCsv:
        write_plot_csv(record.sample, record.fit, out);
        break;
    }
    if (!out) throw std::ios_base::failure("failed to write fit output");
}

} // namespace ordiso::io

#endif // ORDISO_IO_HPP
