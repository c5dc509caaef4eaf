#include <gtest/gtest.h>

#include <sstream>

#include "ordiso/io.hpp"
#include "ordiso/ordered.hpp"
#include "support.hpp"

using namespace ordiso;

namespace {

PairedSample parse(const std::string& text) {
    std::istringstream in(text);
    return io::read_sample(in);
}

io::FitRecord fitted(const PairedSample& s) {
    DualSolution d = solve_dual(s.view(), SolverConfig{});
    io::FitRecord r{s, std::move(d.fit), std::move(d.dual)};
    r.iterations = d.diagnostics.iterations;
    return r;
}

} // namespace

TEST(ReadSample, Basic) {
    const PairedSample s = parse("x,y,z\n1,1,2\n2,2,3\n");
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s.y(), (Vector{1, 2}));
    EXPECT_EQ(s.z(), (Vector{2, 3}));
    EXPECT_EQ(s.w1(), (Vector{1, 1}));
    EXPECT_EQ(s.w2(), (Vector{1, 1}));
}

TEST(ReadSample, MergesTies) {
    const PairedSample s = parse("x,y,z,w1\n1,0,5,1\n1,2,7,3\n");
    ASSERT_EQ(s.size(), 1u);
    EXPECT_DOUBLE_EQ(s.y()[0], 1.5);
    EXPECT_DOUBLE_EQ(s.w1()[0], 4.0);
    EXPECT_DOUBLE_EQ(s.z()[0], 6.0);
    EXPECT_DOUBLE_EQ(s.w2()[0], 2.0);
}

TEST(ReadSample, SortsByX) {
    const PairedSample a = parse("x,y,z\n2,5,6\n1,3,4\n");
    const PairedSample b = parse("x,y,z\n1,3,4\n2,5,6\n");
    EXPECT_EQ(a.x(), b.x());
    EXPECT_EQ(a.y(), b.y());
    EXPECT_EQ(a.z(), b.z());
}

TEST(ReadSample, ColumnOrderAndWhitespace) {
    const PairedSample s = parse("w2, z ,y,x\r\n2, 3, 1, 0.5\r\n\n");
    EXPECT_EQ(s.x(), Vector{0.5});
    EXPECT_EQ(s.y(), Vector{1});
    EXPECT_EQ(s.z(), Vector{3});
    EXPECT_EQ(s.w2(), Vector{2});
}

TEST(ReadSample, ErrorsCarryLineNumbers) {
    try {
        parse("x,y,z\n1,2,3\n2,abc,3\n");
        FAIL() << "expected a parse error";
    } catch (const io::ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse("x,y,z\n1,2\n"), io::ParseError);
    EXPECT_THROW(parse("x,y\n1,2\n"), io::ParseError);
    EXPECT_THROW(parse("x,y,z,q\n1,2,3,4\n"), io::ParseError);
    EXPECT_THROW(parse("x,y,z\n1,2,inf\n"), io::ParseError);
}

TEST(ReadSample, DomainErrors) {
    EXPECT_THROW(parse(""), DomainError);
    EXPECT_THROW(parse("x,y,z\n"), DomainError);
    EXPECT_THROW(parse("x,y,z,w1\n1,2,3,0\n"), DomainError);
    EXPECT_THROW(parse("x,y,z,w2\n1,2,3,-1\n"), DomainError);
}

TEST(WriteFit, CsvSinglePoint) {
    const PairedSample s({7}, {2}, {0}, {1}, {1});
    std::ostringstream out;
    io::write_fit(fitted(s), nullptr, out, io::OutputFormat::Csv);
    EXPECT_EQ(out.str(), "x,a,b\n7,1,1\n");
}

TEST(WriteFit, PlotCsvBlocks) {
    // a = [5/3, 5/3, 2] over x = 1, 2, 3
    const PairedSample s = PairedSample::with_weights({3, 1, 2}, {10, 10, 10}, {1, 2, 1}, {1, 1, 1});
    const io::FitRecord r = fitted(s);
    std::ostringstream out;
    io::write_fit(r, nullptr, out, io::OutputFormat::PlotCsv);
    const std::string v = io::detail::format_double(r.fit.a[0]);
    EXPECT_NEAR(r.fit.a[0], 5.0 / 3, 1e-15);
    EXPECT_EQ(out.str(), "curve,x,value\na,1," + v + "\na,2," + v + "\na,3,2\na,3,2\nb,1,10\nb,3,10\n");
}

TEST(WriteFit, JsonRoundTrip) {
    testkit::Rng rng(31);
    for (int t = 0; t < 50; ++t) {
        const PairedSample s = testkit::random_sample(rng, 1 + t);
        const io::FitRecord r = fitted(s);
        std::stringstream buf;
        io::write_fit(r, nullptr, buf, io::OutputFormat::Json);
        const io::FitRecord back = io::read_fit(buf);
        EXPECT_EQ(back.sample.x(), s.x());
        EXPECT_EQ(back.sample.y(), s.y());
        EXPECT_EQ(back.sample.w2(), s.w2());
        EXPECT_EQ(back.fit.a.values(), r.fit.a.values());
        EXPECT_EQ(back.fit.b.values(), r.fit.b.values());
        EXPECT_EQ(back.dual.lambda, r.dual.lambda);
        EXPECT_EQ(back.fit.objective, r.fit.objective);
        EXPECT_EQ(back.fit.solver_tag, r.fit.solver_tag);
        EXPECT_EQ(back.fit.converged, r.fit.converged);
        EXPECT_EQ(back.iterations, r.iterations);
        EXPECT_EQ(back.kkt_tol, r.kkt_tol);
    }
}

TEST(WriteFit, JsonSchemaFields) {
    const io::FitRecord r = fitted(PairedSample::unweighted({1, 0}, {0, 1}));
    Diagnostics diag;
    const nlohmann::json j = io::to_json(r, &diag);
    EXPECT_EQ(j.at("schema"), "fit-result-v1");
    EXPECT_EQ(j.at("n"), 2);
    for (const char* key : {"input", "fit", "dual", "iterations", "tolerances", "diagnostics"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_TRUE(j.at("fit").contains("max_coupling_violation"));
    EXPECT_TRUE(j.at("dual").contains("lambda"));
}

TEST(ReadFit, RejectsBadRecords) {
    std::istringstream junk("{not json");
    EXPECT_THROW(io::read_fit(junk), io::ParseError);
    std::istringstream wrong(R"({"schema": "other"})");
    EXPECT_THROW(io::read_fit(wrong), DomainError);
    std::istringstream partial(R"({"schema": "fit-result-v1", "input": {}})");
    EXPECT_THROW(io::read_fit(partial), DomainError);
}

// Expanding a merged fit back over the duplicated rows adds exactly the
// within-tie sum of squares to the objective.
TEST(TieMerging, ObjectiveIdentity) {
    testkit::Rng rng(17);
    std::normal_distribution<double> normal;
    std::uniform_int_distribution<int> reps(1, 3);
    for (int t = 0; t < 100; ++t) {
        std::vector<io::RawRecord> raw;
        for (int k = 0; k < 12; ++k) {
            const int r = reps(rng);
            for (int i = 0; i < r; ++i) raw.push_back({double(k), normal(rng), normal(rng), 1.0 + i, 2.0 - 0.5 * i});
        }
        const PairedSample merged = io::merge_ties(raw);
        const DualSolution d = solve_dual(merged.view(), SolverConfig{});
        double raw_obj = 0.0, within = 0.0;
        for (const auto& rec : raw) {
            const std::size_t j = static_cast<std::size_t>(rec.x);
            const double ra = rec.y - d.fit.a[j], rb = rec.z - d.fit.b[j];
            raw_obj += rec.w1 * ra * ra + rec.w2 * rb * rb;
            const double ma = rec.y - merged.y()[j], mb = rec.z - merged.z()[j];
            within += rec.w1 * ma * ma + rec.w2 * mb * mb;
        }
        EXPECT_NEAR(raw_obj, d.fit.objective + within, 1e-10 * raw_obj);

        // the duplicated sequence without ties is a relaxation
        Vector y, z, w1, w2;
        for (const auto& rec : raw) {
            y.push_back(rec.y);
            z.push_back(rec.z);
            w1.push_back(rec.w1);
            w2.push_back(rec.w2);
        }
        const DualSolution du = solve_dual(PairedSample::with_weights(y, z, w1, w2).view(), SolverConfig{});
        EXPECT_LE(du.fit.objective, raw_obj + 1e-9);
    }
}

// Identical responses inside each tie group and w2 proportional to w1 there:
// averaging a tie group then keeps both orders and lowers both rows, so the
// unmerged problem on the duplicated sequence has the merged optimum.
TEST(TieMerging, MatchesUnmergedProblem) {
    testkit::Rng rng(23);
    std::normal_distribution<double> normal;
    std::uniform_int_distribution<int> reps(1, 3);
    for (int t = 0; t < 100; ++t) {
        std::vector<io::RawRecord> raw;
        Vector y, z, w1, w2;
        for (int k = 0; k < 10; ++k) {
            const double yk = normal(rng), zk = normal(rng), ratio = 0.5 + 0.25 * reps(rng);
            const int r = reps(rng);
            for (int i = 0; i < r; ++i) {
                raw.push_back({double(k), yk, zk, 0.5 + i, ratio * (0.5 + i)});
                y.push_back(yk);
                z.push_back(zk);
                w1.push_back(0.5 + i);
                w2.push_back(ratio * (0.5 + i));
            }
        }
        const PairedSample merged = io::merge_ties(raw);
        const PairedSample unmerged = PairedSample::with_weights(y, z, w1, w2);
        const DualSolution dm = solve_dual(merged.view(), SolverConfig{});
        const DualSolution du = solve_dual(unmerged.view(), SolverConfig{});
        EXPECT_NEAR(dm.fit.objective, du.fit.objective, 1e-9 * std::max(1.0, du.fit.objective));
    }
}
