#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "generators.hpp"
#include "ofp/contraction.hpp"
#include "ofp/operators.hpp"

using namespace ofp;

namespace {

// Reference values from 30-digit evaluation of t ln(1 + 1/t).
constexpr double kLn2 = 0.693147180559945309417232121458;
constexpr double kLogRateAtOne = 0.429093525881801607932318475406;

std::vector<double> log_spaced(std::size_t count, double lo, double hi) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * static_cast<double>(i) /
                                             static_cast<double>(count - 1));
    }
    return out;
}

} // namespace

TEST_CASE("eval_modulus") {
    CHECK(eval_modulus(Modulus::constant(3.0 / 20.0), 7.3) == 0.15);
    CHECK(eval_modulus(Modulus::logarithmic(), 1.0) == doctest::Approx(kLn2).epsilon(1e-15));

    const Modulus f = Modulus::logarithmic();
    const double expected[] = {0.239789527279837054, 0.549306144334054846, 0.693147180559945309,
                               0.953101798043248600};
    const double ts[] = {0.1, 0.5, 1.0, 10.0};
    for (int i = 0; i < 4; ++i) {
        CHECK(f(ts[i]) == doctest::Approx(expected[i]).epsilon(1e-14));
        if (i > 0) CHECK(f(ts[i]) > f(ts[i - 1]));
    }

    CHECK_THROWS_AS(f(0.0), DomainError);
    CHECK_THROWS_AS(f(-1.0), DomainError);
    CHECK_THROWS_AS(Modulus::constant(3.0 / 20.0)(0.0), DomainError);
    CHECK_THROWS_AS(Modulus::constant(1.0), DomainError);
    CHECK_THROWS_AS(Modulus::constant(0.0), DomainError);
}

TEST_CASE("logarithmic modulus stays inside (0,1) at extreme arguments") {
    const Modulus f = Modulus::logarithmic();
    for (double t : {1e-300, 1e-30, 1e30, 1e300}) {
        CHECK(f(t) > 0.0);
        CHECK(f(t) < 1.0);
    }
}

TEST_CASE("property: shipped moduli honour range and monotonicity") {
    const auto ts = log_spaced(10000, 1e-9, 1e9);
    const Modulus shipped[] = {
        Modulus::constant(0.15), Modulus::constant(0.9), Modulus::logarithmic(),
        Modulus::user([](double t) { return t / (1.0 + t); }, "t/(1+t)"),
    };
    for (const auto& f : shipped) {
        double prev = 0.0;
        for (double t : ts) {
            const double v = f(t);
            REQUIRE(v > 0.0);
            REQUIRE(v < 1.0);
            REQUIRE(v >= prev);
            prev = v;
        }
    }
}

TEST_CASE("user modulus validation") {
    CHECK_THROWS_AS(Modulus::user([](double) { return 1.0; }), DomainError);
    CHECK_THROWS_AS(Modulus::user([](double t) { return 1.0 / (2.0 + t); }), DomainError);
    CHECK_THROWS_AS(Modulus::user(nullptr), DomainError);
    const Modulus ok = Modulus::user([](double) { return 0.3; }, "flat");
    CHECK(ok.kind() == Modulus::Kind::user);
    CHECK(ok.describe() == "flat");
}

TEST_CASE("violation_ratio") {
    CHECK(violation_ratio(1.0, 2.0, 0.0) == 0.5);
    CHECK(violation_ratio(-1.0, 0.0, 0.0) == 0.0);
    CHECK(violation_ratio(1e-13, 0.0, 1e-12) == doctest::Approx(0.1));
    CHECK(std::isinf(violation_ratio(1e-13, 0.0, 0.0)));
}

TEST_CASE("check_condition_H on a constant map") {
    const auto w0 = GridFunction::sample(50, [](double t) { return std::cos(t); });
    const Operator a([w0](const GridFunction&) { return w0; });
    PairSamplerConfig cfg;
    cfg.n = 50;
    cfg.count = 50;
    const auto pairs = sample_comparable_pairs(cfg);
    for (const Modulus& f : {Modulus::constant(0.01), Modulus::logarithmic()}) {
        const auto report = check_condition_H(a, f, pairs);
        CHECK(report.passed());
        CHECK(report.pairs_tested == 50);
        CHECK_FALSE(report.witness.has_value());
    }
}

TEST_CASE("check_condition_H on the signal operator with modulus 3/20") {
    PairSamplerConfig cfg;
    cfg.n = 200;
    cfg.count = 200;
    cfg.seed = 5;
    const auto pairs = sample_comparable_pairs(cfg);
    const auto report =
        check_condition_H(SignalFeedbackOperator(1).as_operator(), Modulus::constant(0.15), pairs);
    CHECK(report.pairs_tested == 200);
    CHECK(report.passed());
    CHECK(report.worst_ratio <= 1.0);
}

TEST_CASE("check_condition_H finds a witness for u -> -2u") {
    const Operator reflect([](const GridFunction& u) { return -2.0 * u; });
    const Modulus f = Modulus::constant(0.5);
    PairSamplerConfig cfg;
    cfg.n = 20;
    cfg.count = 30;
    const auto pairs = sample_comparable_pairs(cfg);
    const auto report = check_condition_H(reflect, f, pairs);
    REQUIRE_FALSE(report.passed());
    CHECK(report.worst_ratio > 1.0);
    REQUIRE(report.witness.has_value());
    const auto& w = std::get<PairWitness>(*report.witness);

    // brute-force recomputation at the witness node
    const double d = sup_distance(w.upper, w.lower);
    const Eigen::Index i = w.node;
    const double lhs = -2.0 * w.lower[i] + 2.0 * w.upper[i];
    const double rhs = 0.5 * (w.upper[i] - w.lower[i]);
    CHECK(d > 0.0);
    CHECK(lhs > rhs + ConeSpec{}.order_tol);
    CHECK(w.lhs == doctest::Approx(lhs));
    CHECK(w.rhs == doctest::Approx(rhs));

    // the identity is increasing, so the reversed inequality holds trivially
    const Operator identity([](const GridFunction& u) { return u; });
    CHECK(check_condition_H(identity, f, pairs).passed());
}

TEST_CASE("check_condition_H rejects incomparable pairs") {
    const auto u = GridFunction::sample(10, [](double t) { return t; });
    const auto v = GridFunction::sample(10, [](double t) { return 1.0 - t; });
    const std::vector<ComparablePair> pairs{{u, v}};
    const Operator identity([](const GridFunction& x) { return x; });
    CHECK_THROWS_AS(check_condition_H(identity, Modulus::constant(0.5), pairs), SamplerError);
}

TEST_CASE("sampler produces comparable pairs deterministically") {
    PairSamplerConfig cfg;
    cfg.n = 30;
    cfg.count = 40;
    cfg.seed = 99;
    const auto a = sample_comparable_pairs(cfg);
    const auto b = sample_comparable_pairs(cfg);
    REQUIRE(a.size() == 40);
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(leq(a[k].lower, a[k].upper));
        CHECK(a[k].lower.values().minCoeff() >= 0.0);
        CHECK(a[k].upper.values().maxCoeff() <= 1.0);
        CHECK(a[k].lower.values() == b[k].lower.values());
        CHECK(a[k].upper.values() == b[k].upper.values());
    }
}

TEST_CASE("contraction_rate") {
    const ConeSpec spec;
    CHECK(contraction_rate(Modulus::constant(0.15), spec, 0.37) == doctest::Approx(0.0225).epsilon(1e-15));
    for (double c : {0.1, 0.5, 0.9}) {
        CHECK(contraction_rate(Modulus::constant(c), spec, 2.0) == doctest::Approx(c * c).epsilon(1e-15));
    }

    // independent long-double evaluation of f(f(1)) f(1)
    const auto fl = [](long double t) { return t * std::log1p(1.0L / t); };
    const long double oracle = fl(fl(1.0L)) * fl(1.0L);
    const double lam = contraction_rate(Modulus::logarithmic(), spec, 1.0);
    CHECK(lam == doctest::Approx(static_cast<double>(oracle)).epsilon(1e-14));
    CHECK(lam == doctest::Approx(kLogRateAtOne).epsilon(1e-14));

    CHECK_THROWS_AS(contraction_rate(Modulus::logarithmic(), spec, 0.0), DomainError);
    CHECK_THROWS_AS(contraction_rate(Modulus::logarithmic(), spec, -1.0), DomainError);
}

TEST_CASE("contraction_rate uses N and M") {
    ConeSpec spec;
    spec.normal_constant = 2.0;
    spec.upper_equiv = 3.0;
    const auto f = [](double t) { return t * std::log1p(1.0 / t); };
    const double d0 = 0.2;
    const double expected = f(2.0 * f(3.0 * d0) * 3.0 * d0) * f(3.0 * d0);
    CHECK(contraction_rate(Modulus::logarithmic(), spec, d0) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("property: contraction_rate lands in (0,1)") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        ConeSpec spec;
        spec.normal_constant = 1.0 + 10.0 * unit(rng);
        spec.upper_equiv = 1.0 + 10.0 * unit(rng);
        const double d0 = std::exp(-20.0 + 40.0 * unit(rng));
        const double c = 0.001 + 0.998 * unit(rng);
        for (const Modulus& f : {Modulus::constant(c), Modulus::logarithmic()}) {
            const double lam = contraction_rate(f, spec, d0);
            REQUIRE(lam > 0.0);
            REQUIRE(lam < 1.0);
        }
    }
}

TEST_CASE("a_priori_bound") {
    CHECK(a_priori_bound(0.0225, 1.0, 0) == doctest::Approx(1.02301790281329923).epsilon(1e-15));
    CHECK(a_priori_bound(0.3, 0.0, 7) == 0.0);
    CHECK(a_priori_bound(0.5, 2.0, 3) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(a_priori_bound(1.0, 1.0, 0), DomainError);
    CHECK_THROWS_AS(a_priori_bound(0.0, 1.0, 0), DomainError);
    CHECK_THROWS_AS(a_priori_bound(0.5, -1.0, 0), DomainError);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double lam = 0.001 + 0.998 * unit(rng);
        const double d0 = 10.0 * unit(rng);
        const std::size_t k = static_cast<std::size_t>(50 * unit(rng));
        CHECK(a_priori_bound(lam, d0, k + 1) == lam * a_priori_bound(lam, d0, k));
        CHECK(a_priori_bound(lam, d0, k + 1) <= a_priori_bound(lam, d0, k));
    }
}

TEST_CASE("a_posteriori_bound") {
    CHECK(a_posteriori_bound(0.0225, 1e-6) == doctest::Approx(2.30179028132992327e-8).epsilon(1e-14));
    CHECK(a_posteriori_bound(0.3, 0.0) == 0.0);
    CHECK(a_posteriori_bound(0.5, 0.1) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK_THROWS_AS(a_posteriori_bound(1.5, 0.1), DomainError);
    CHECK_THROWS_AS(a_posteriori_bound(0.5, -0.1), DomainError);
}

TEST_CASE("squared operator contraction on the signal operator") {
    PairSamplerConfig cfg;
    cfg.n = 100;
    cfg.count = 100;
    cfg.seed = 77;
    const auto pairs = sample_comparable_pairs(cfg);
    const auto report = check_squared_contraction(SignalFeedbackOperator(1).as_operator(),
                                                  Modulus::constant(0.15), pairs);
    CHECK(report.pairs_tested == 100);
    CHECK(report.passed());
    CHECK((report.worst_ratio <= 1.0) == report.passed());
}
