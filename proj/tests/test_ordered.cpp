#include <gtest/gtest.h>

#include "ordiso/oracle.hpp"
#include "ordiso/ordered.hpp"
#include "support.hpp"

using namespace ordiso;
using ordiso::testkit::Rng;

namespace {

const PairedSample& certified() {
    static const PairedSample s = PairedSample::unweighted({1, 0}, {0, 1});
    return s;
}

PairedSample mirrored(const PairedSample& s) {
    return PairedSample::with_weights(testkit::negated_reversed(s.z()), testkit::negated_reversed(s.y()),
                                      testkit::reversed(s.w2()), testkit::reversed(s.w1()));
}

PairedSample scaled_weights(const PairedSample& s, double c) {
    Vector w1 = s.w1(), w2 = s.w2();
    for (auto& w : w1) w *= c;
    for (auto& w : w2) w *= c;
    return PairedSample::with_weights(s.y(), s.z(), std::move(w1), std::move(w2));
}

} // namespace

TEST(SolveDual, InactiveConstraints) {
    const auto s = PairedSample::unweighted({1, 2}, {3, 4});
    const DualSolution d = solve_dual(s.view(), SolverConfig{});
    EXPECT_TRUE(d.diagnostics.converged);
    EXPECT_EQ(d.diagnostics.iterations, 0u);
    EXPECT_EQ(d.fit.a.values(), (Vector{1, 2}));
    EXPECT_EQ(d.fit.b.values(), (Vector{3, 4}));
    EXPECT_EQ(d.dual.lambda, (Vector{0, 0}));
    EXPECT_EQ(d.fit.solver_tag, "dual-subgradient");
}

TEST(SolveDual, SinglePoint) {
    const auto s = PairedSample::unweighted({2}, {0});
    const DualSolution d = solve_dual(s.view(), SolverConfig{});
    ASSERT_TRUE(d.diagnostics.converged);
    EXPECT_NEAR(d.fit.a[0], 1.0, 1e-12);
    EXPECT_NEAR(d.fit.b[0], 1.0, 1e-12);
    EXPECT_NEAR(d.dual.lambda[0], 2.0, 1e-10);
    const PairFit o = oracle::dykstra_project(s, 1e-12, 1000);
    EXPECT_NEAR(o.a[0], d.fit.a[0], 1e-10);
}

TEST(SolveDual, CertifiedInstance) {
    const DualSolution d = solve_dual(OrderedConeProblem{certified(), SolverConfig{}});
    ASSERT_TRUE(d.diagnostics.converged);
    EXPECT_NEAR(d.fit.a[0], 1.0 / 3, 1e-12);
    EXPECT_NEAR(d.fit.a[1], 1.0 / 3, 1e-12);
    EXPECT_NEAR(d.fit.b[0], 1.0 / 3, 1e-12);
    EXPECT_NEAR(d.fit.b[1], 1.0, 1e-12);
    EXPECT_NEAR(d.fit.objective, 2.0 / 3, 1e-12);
    EXPECT_NEAR(d.dual.lambda[0], 2.0 / 3, 1e-10);
    EXPECT_NEAR(d.dual.lambda[1], 0.0, 1e-10);

    const PairFit dk = oracle::dykstra_project(certified(), 1e-10, 1000000);
    EXPECT_LE(testkit::max_abs_diff(dk.a.values(), d.fit.a.values()), 1e-8);
    EXPECT_LE(testkit::max_abs_diff(dk.b.values(), d.fit.b.values()), 1e-8);
    EXPECT_NEAR(oracle::brute_force(certified(), 5e-3).objective, d.fit.objective, 1e-2);
}

TEST(SolveDual, DiminishingRule) {
    SolverConfig c;
    c.step_rule = StepRule::Diminishing;
    const DualSolution d = solve_dual(certified().view(), c);
    ASSERT_TRUE(d.diagnostics.converged);
    EXPECT_NEAR(d.fit.objective, 2.0 / 3, 1e-10);
}

TEST(SolveDual, IterationCapIsFlaggedNotThrown) {
    Rng rng(4);
    SolverConfig c;
    c.max_iter = 1;
    c.step_rule = StepRule::Diminishing;
    c.step_constant = 1e-9;
    bool saw_flag = false;
    for (int t = 0; t < 20 && !saw_flag; ++t) {
        const PairedSample s = testkit::random_sample(rng, 40);
        const DualSolution d = solve_dual(s.view(), c);
        EXPECT_TRUE(is_feasible(d.fit.a.values(), d.fit.b.values(), 0.0));
        saw_flag = !d.diagnostics.converged && !d.fit.converged;
    }
    EXPECT_TRUE(saw_flag);
}

TEST(SolveDual, RejectsInvalidInput) {
    const Vector y{1, 2}, z{1, 2}, w{1, -1}, ones{1, 1};
    EXPECT_THROW(solve_dual(PairView{y, z, w, ones}, SolverConfig{}), DomainError);
    SolverConfig bad;
    bad.feas_tol = 0.0;
    EXPECT_THROW(solve_dual(PairView{y, z, ones, ones}, bad), DomainError);
}

TEST(SolveDual, OracleCheckFlag) {
    SolverConfig c;
    c.oracle_check = true;
    const DualSolution d = solve_dual(certified().view(), c);
    ASSERT_TRUE(d.diagnostics.oracle_certified.has_value());
    EXPECT_TRUE(*d.diagnostics.oracle_certified);
}

TEST(ProjectPair, ConeMemberUnchanged) {
    const Vector u{0, 1}, v{1, 2}, w{1, 1};
    const PairFit f = project_ordered_pair(u, v, w, w, SolverConfig{});
    EXPECT_EQ(f.a.values(), u);
    EXPECT_EQ(f.b.values(), v);
    EXPECT_EQ(f.solver_tag, "generalized-pava");
}

TEST(ProjectPair, WeightedSinglePoint) {
    const PairFit f = project_ordered_pair(Vector{2}, Vector{0}, Vector{3}, Vector{1}, SolverConfig{});
    EXPECT_DOUBLE_EQ(f.a[0], 1.5);
    EXPECT_DOUBLE_EQ(f.b[0], 1.5);
}

TEST(ProjectPair, CertifiedInstance) {
    const PairFit f = project_ordered_pair(certified(), SolverConfig{});
    EXPECT_NEAR(f.a[0], 1.0 / 3, 1e-12);
    EXPECT_NEAR(f.a[1], 1.0 / 3, 1e-12);
    EXPECT_NEAR(f.b[0], 1.0 / 3, 1e-12);
    EXPECT_NEAR(f.b[1], 1.0, 1e-12);
}

TEST(Kkt, CertifiedInstancePasses) {
    const Vector a{1.0 / 3, 1.0 / 3}, b{1.0 / 3, 1.0}, lambda{2.0 / 3, 0.0};
    const KktReport r = kkt_check(certified().view(), a, b, lambda, 1e-9);
    EXPECT_TRUE(r.ok()) << r.describe();
}

TEST(Kkt, NegativeMultiplier) {
    const Vector a{1.0 / 3, 1.0 / 3}, b{1.0 / 3, 1.0}, lambda{-0.1, 0.0};
    const KktReport r = kkt_check(certified().view(), a, b, lambda, 1e-9);
    ASSERT_FALSE(r.ok());
    EXPECT_EQ(r.violations.front().kind, KktViolation::Kind::NegativeMultiplier);
    EXPECT_NE(r.describe().find("dual-feasibility"), std::string::npos);
}

TEST(Kkt, ComplementarySlackness) {
    const Vector a{0, 0}, b{1, 1}, lambda{1, 0};
    const KktReport r = kkt_check(certified().view(), a, b, lambda, 1e-6);
    bool found = false;
    for (const auto& v : r.violations) {
        if (v.kind == KktViolation::Kind::ComplementarySlackness && v.index == 0) {
            found = true;
            EXPECT_DOUBLE_EQ(v.magnitude, 1.0);
        }
    }
    EXPECT_TRUE(found) << r.describe();
}

TEST(Kkt, DimensionMismatch) {
    const Vector a{0, 0}, b{1, 1}, lambda{1};
    EXPECT_THROW(kkt_check(certified().view(), a, b, lambda, 1e-6), DimensionError);
}

class OrderedProperties : public ::testing::Test {
protected:
    Rng rng{99};
    PairedSample next(std::size_t max_n = 50) {
        std::uniform_int_distribution<std::size_t> size(1, max_n);
        return testkit::random_sample(rng, size(rng));
    }
};

TEST_F(OrderedProperties, SolversAgree) {
    for (int t = 0; t < 300; ++t) {
        const PairedSample s = next();
        const DualSolution d = solve_dual(s.view(), SolverConfig{});
        const PairFit g = project_ordered_pair(s, SolverConfig{});
        const PairFit o = oracle::dykstra_project(s, 1e-13, 5000000);
        ASSERT_TRUE(d.diagnostics.converged);
        for (const PairFit* f : {&g, &o}) {
            EXPECT_LE(testkit::max_abs_diff(d.fit.a.values(), f->a.values()), 1e-6) << f->solver_tag;
            EXPECT_LE(testkit::max_abs_diff(d.fit.b.values(), f->b.values()), 1e-6) << f->solver_tag;
            EXPECT_LE(std::abs(d.fit.objective - f->objective), 1e-8 * std::max(1.0, d.fit.objective))
                << f->solver_tag;
        }
        const KktReport r = kkt_check(s, d.fit, d.dual.lambda, 1e-6);
        EXPECT_TRUE(r.ok()) << r.describe();
    }
}

TEST_F(OrderedProperties, InactiveReduction) {
    for (int t = 0; t < 200; ++t) {
        const PairedSample base = next();
        // lift z until the independent fits are ordered
        const Vector fa = isotonic_fit(base.y(), base.w1()).values();
        Vector fb = isotonic_fit(base.z(), base.w2()).values();
        double shift = 0.0;
        for (std::size_t j = 0; j < base.size(); ++j) shift = std::max(shift, fa[j] - fb[j]);
        Vector z = base.z();
        for (auto& v : z) v += shift + 0.25;
        const PairedSample s = PairedSample::with_weights(base.y(), z, base.w1(), base.w2());
        fb = isotonic_fit(s.z(), s.w2()).values();
        ASSERT_TRUE(is_feasible(fa, fb, 0.0));

        const DualSolution d = solve_dual(s.view(), SolverConfig{});
        EXPECT_EQ(d.fit.a.values(), fa);
        EXPECT_EQ(d.fit.b.values(), fb);
        EXPECT_EQ(d.dual.lambda, Vector(s.size(), 0.0));
        EXPECT_LE(d.diagnostics.iterations, 1u);
        const PairFit g = project_ordered_pair(s, SolverConfig{});
        EXPECT_EQ(g.a.values(), fa);
        EXPECT_EQ(g.b.values(), fb);
    }
}

TEST_F(OrderedProperties, BestDualIsMonotoneAndBelowPrimal) {
    SolverConfig c;
    c.step_rule = StepRule::Diminishing;
    for (int t = 0; t < 200; ++t) {
        const PairedSample s = next();
        for (const StepRule rule : {StepRule::Polyak, StepRule::Diminishing}) {
            c.step_rule = rule;
            const DualSolution d = solve_dual(s.view(), c);
            const auto& best = d.diagnostics.best_dual_values;
            ASSERT_EQ(best.size(), d.diagnostics.dual_values.size());
            for (std::size_t k = 1; k < best.size(); ++k) EXPECT_GE(best[k], best[k - 1]);
            for (const double q : d.diagnostics.dual_values) EXPECT_LE(q, d.fit.objective + 1e-10);
            for (const double q : best) EXPECT_LE(q, d.fit.objective + 1e-10);
            EXPECT_LE(d.dual.dual_value, d.fit.objective + 1e-10);
        }
    }
}

TEST_F(OrderedProperties, MirrorSymmetry) {
    for (int t = 0; t < 200; ++t) {
        const PairedSample s = next();
        const DualSolution d = solve_dual(s.view(), SolverConfig{});
        const DualSolution m = solve_dual(mirrored(s).view(), SolverConfig{});
        EXPECT_LE(testkit::max_abs_diff(testkit::negated_reversed(m.fit.b.values()), d.fit.a.values()), 1e-8);
        EXPECT_LE(testkit::max_abs_diff(testkit::negated_reversed(m.fit.a.values()), d.fit.b.values()), 1e-8);
    }
}

TEST_F(OrderedProperties, BeatsRandomFeasibleCandidates) {
    for (int t = 0; t < 100; ++t) {
        const PairedSample s = next(20);
        const std::size_t n = s.size();
        const DualSolution d = solve_dual(s.view(), SolverConfig{});
        for (int c = 0; c < 100; ++c) {
            Vector a = testkit::random_nondecreasing(rng, n, 1.5);
            Vector b = testkit::random_nondecreasing(rng, n, 1.5);
            repair_feasibility(s.view(), a, b);
            ASSERT_TRUE(is_feasible(a, b, 0.0));
            EXPECT_LE(d.fit.objective, objective(s, a, b) + 1e-9);
        }
    }
}

TEST_F(OrderedProperties, WeightScaling) {
    SolverConfig c;
    for (int t = 0; t < 200; ++t) {
        const PairedSample s = next();
        const DualSolution d = solve_dual(s.view(), c);
        for (const double k : {0.1, 10.0}) {
            const DualSolution ds = solve_dual(scaled_weights(s, k).view(), c);
            EXPECT_LE(testkit::max_abs_diff(ds.fit.a.values(), d.fit.a.values()), c.feas_tol);
            EXPECT_LE(testkit::max_abs_diff(ds.fit.b.values(), d.fit.b.values()), c.feas_tol);
            const PairFit g = project_ordered_pair(scaled_weights(s, k), c);
            EXPECT_LE(testkit::max_abs_diff(g.a.values(), d.fit.a.values()), c.feas_tol);
        }
    }
}

TEST_F(OrderedProperties, CertifyPooledPairs) {
    for (int t = 0; t < 200; ++t) {
        const PairedSample s = next();
        const PairFit g = project_ordered_pair(s, SolverConfig{});
        LagrangianSolver solver(s.view());
        const Certificate cert = certify(s.view(), g.a.values(), g.b.values(), solver);
        EXPECT_LE(g.objective - cert.dual_value, 1e-8 * std::max(1.0, g.objective));
        EXPECT_TRUE(kkt_check(s, g, cert.lambda, 1e-6).ok());
    }
}

TEST_F(OrderedProperties, RepairYieldsFeasiblePairs) {
    for (int t = 0; t < 200; ++t) {
        const PairedSample s = next();
        Vector a(s.y()), b(s.z());
        repair_feasibility(s.view(), a, b);
        EXPECT_TRUE(is_feasible(a, b, 0.0));
        EXPECT_TRUE(MonotoneFit(a).is_nondecreasing());
        EXPECT_TRUE(MonotoneFit(b).is_nondecreasing());

        // ordered monotone pairs are left alone
        const Vector fa = a, fb = b;
        repair_feasibility(s.view(), a, b);
        EXPECT_EQ(a, fa);
        EXPECT_EQ(b, fb);
    }
}
