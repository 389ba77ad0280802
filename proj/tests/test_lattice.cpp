#include <doctest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "ofp/lattice.hpp"

using namespace ofp;

namespace {

GridFunction identity_fn(std::size_t n) {
    return GridFunction::sample(n, [](double t) { return t; });
}

} // namespace

TEST_CASE("grid function construction") {
    const auto u = GridFunction::constant(4, 2.5);
    CHECK(u.n() == 4);
    CHECK(u.size() == 5);
    CHECK(u.node(2) == doctest::Approx(0.5));

    CHECK_THROWS_AS(GridFunction(Eigen::VectorXd::Zero(1)), DomainError);
    Eigen::VectorXd bad = Eigen::VectorXd::Zero(3);
    bad[1] = std::nan("");
    CHECK_THROWS_AS(GridFunction{bad}, DomainError);
    bad[1] = INFINITY;
    CHECK_THROWS_AS(GridFunction{bad}, DomainError);
}

TEST_CASE("mismatched grids are rejected") {
    const auto a = GridFunction::zero(10);
    const auto b = GridFunction::zero(11);
    CHECK_THROWS_AS(leq(a, b), GridMismatchError);
    CHECK_THROWS_AS(inf_sup(a, b), GridMismatchError);
    CHECK_THROWS_AS(a - b, GridMismatchError);
}

TEST_CASE("leq") {
    const std::size_t n = 100;
    CHECK(leq(GridFunction::zero(n), GridFunction::constant(n, 1.0)));

    const auto t = identity_fn(n);
    const auto t2 = GridFunction::sample(n, [](double s) { return s * s; });
    CHECK_FALSE(leq(t, t2));
    CHECK(leq(t2, t));

    const auto wave = GridFunction::sample(n, [](double s) { return std::sin(2.0 * std::numbers::pi * s); });
    const auto zero = GridFunction::zero(n);
    CHECK_FALSE(leq(wave, zero));
    CHECK_FALSE(leq(zero, wave));
    CHECK_FALSE(comparable(wave, zero));
}

TEST_CASE("order tolerance") {
    const auto u = GridFunction::constant(3, 1.0 + 1e-13);
    const auto v = GridFunction::constant(3, 1.0);
    CHECK(leq(u, v));
    ConeSpec strict;
    strict.order_tol = 0.0;
    CHECK_FALSE(leq(u, v, strict));
}

TEST_CASE("inf_sup") {
    const std::size_t n = 100;
    const auto u = identity_fn(n);
    {
        const auto [lo, hi] = inf_sup(u, u);
        CHECK(lo.values() == u.values());
        CHECK(hi.values() == u.values());
    }
    {
        const auto [lo, hi] = inf_sup(GridFunction::zero(n), GridFunction::constant(n, 1.0));
        CHECK(lo.values().isZero());
        CHECK((hi.values().array() == 1.0).all());
    }
    {
        const auto v = GridFunction::sample(n, [](double s) { return 1.0 - s; });
        const auto [lo, hi] = inf_sup(u, v);
        Eigen::Index arg = 0;
        CHECK(lo.values().maxCoeff(&arg) == doctest::Approx(0.5));
        CHECK(arg == 50);
        for (Eigen::Index i = 0; i < lo.size(); ++i) {
            CHECK(lo[i] == std::min(u[i], v[i]));
            CHECK(hi[i] == std::max(u[i], v[i]));
            if (i != 50) CHECK(lo[i] < 0.5);
        }
    }
}

TEST_CASE("sup_norm") {
    CHECK(sup_norm(GridFunction::zero(10)) == 0.0);
    CHECK(sup_norm(identity_fn(10)) == 1.0);
    const auto wave = GridFunction::sample(100, [](double s) { return std::sin(2.0 * std::numbers::pi * s); });
    double scan = 0.0;
    for (Eigen::Index i = 0; i < wave.size(); ++i) scan = std::max(scan, std::abs(wave[i]));
    CHECK(sup_norm(wave) == scan);
    CHECK(sup_norm(wave) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("monotone_norm") {
    CHECK(monotone_norm(identity_fn(10)) == 1.0);
    CHECK(monotone_norm(GridFunction::zero(10)) == 0.0);

    ConeSpec spec;
    spec.upper_equiv = 2.0;
    spec.lower_equiv = 1.0;
    spec.monotone_scale = 0.5;
    spec.validate();
    const auto one = GridFunction::constant(10, 1.0);
    const double n1 = monotone_norm(one, spec);
    CHECK(n1 == 0.5);
    CHECK(spec.lower_equiv * n1 <= sup_norm(one));
    CHECK(sup_norm(one) <= spec.upper_equiv * n1);
}

TEST_CASE("cone spec validation") {
    ConeSpec spec;
    CHECK_NOTHROW(spec.validate());
    spec.normal_constant = 0.5;
    CHECK_THROWS_AS(spec.validate(), DomainError);
    spec = {};
    spec.lower_equiv = 2.0;
    CHECK_THROWS_AS(spec.validate(), DomainError);
    spec = {};
    spec.monotone_scale = 0.25;  // sup <= M * 0.25 * sup fails for M = 1
    CHECK_THROWS_AS(spec.validate(), DomainError);
    spec = {};
    spec.order_tol = -1.0;
    CHECK_THROWS_AS(spec.validate(), DomainError);
}

TEST_CASE("property: partial order and lattice laws") {
    std::mt19937_64 rng(17);
    const ConeSpec spec;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 40;
        const auto u = testing::random_grid(rng, n, -2.0, 2.0);
        const auto v = testing::random_grid(rng, n, -2.0, 2.0);

        CHECK(leq(u, u, spec));

        // chains u <= w <= z built by raising
        const auto w = testing::raise(rng, u, 1.0);
        const auto z = testing::raise(rng, w, 1.0);
        CHECK(leq(u, w, spec));
        CHECK(leq(w, z, spec));
        CHECK(leq(u, z, spec));

        // antisymmetry up to order_tol
        if (leq(u, v, spec) && leq(v, u, spec)) {
            CHECK(sup_distance(u, v) <= spec.order_tol);
        }

        const auto [lo, hi] = inf_sup(u, v);
        CHECK(leq(lo, u, spec));
        CHECK(leq(lo, v, spec));
        CHECK(leq(u, hi, spec));
        CHECK(leq(v, hi, spec));
        // absorption
        CHECK(inf_sup(u, hi).first.values() == u.values());
        CHECK(inf_sup(u, lo).second.values() == u.values());
    }
}

TEST_CASE("property: norm monotonicity and equivalence sandwich") {
    std::mt19937_64 rng(23);
    ConeSpec scaled;
    scaled.upper_equiv = 4.0;
    scaled.lower_equiv = 0.5;
    scaled.monotone_scale = 0.75;
    scaled.validate();
    for (const ConeSpec& spec : {ConeSpec{}, scaled}) {
        for (int trial = 0; trial < 200; ++trial) {
            const auto u = testing::random_grid(rng, 20, 0.0, 3.0);
            const auto v = testing::raise(rng, u, 2.0);
            CHECK(monotone_norm(u, spec) <= monotone_norm(v, spec));

            const auto x = testing::random_grid(rng, 20, -5.0, 5.0);
            const double n1 = monotone_norm(x, spec);
            CHECK(spec.lower_equiv * n1 <= sup_norm(x));
            CHECK(sup_norm(x) <= spec.upper_equiv * n1);
        }
    }
}

TEST_CASE("scalar template instantiates for long double") {
    using GF = BasicGridFunction<long double>;
    const auto u = GF::sample(8, [](long double t) { return t * t; });
    const auto v = GF::constant(8, 1.0L);
    CHECK(leq(u, v, BasicConeSpec<long double>{}));
    CHECK(sup_norm(u) == 1.0L);
}
