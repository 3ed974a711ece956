#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"

#include "jumpdyn/configuration.hpp"

using namespace jumpdyn;

namespace {

KernelModel make_model() {
    return KernelModel(TorusGrid(1, 20.0, 256),
                       RadialProfile::gaussian(1.0, 1.0),
                       RadialProfile::gaussian(0.5, 1.0),
                       RadialProfile::gaussian(1.0, 1.0));
}

} // namespace

TEST_CASE("serialize / deserialize round trip") {
    Configuration eta;
    eta.points = {Point{1.25, 0.0}, Point{0.1234567890123456, 0.0},
                  Point{19.99, 0.0}};
    Configuration back = Configuration::deserialize(eta.serialize(1), 1);
    REQUIRE(back.size() == eta.size());
    for (std::size_t i = 0; i < eta.size(); ++i)
        CHECK(back.points[i][0] == eta.points[i][0]);

    Configuration eta2;
    eta2.points = {Point{1.0, 2.0}, Point{3.5, 4.25}};
    Configuration back2 = Configuration::deserialize(eta2.serialize(2), 2);
    REQUIRE(back2.size() == 2);
    CHECK(back2.points[1][1] == 4.25);
}

TEST_CASE("pair sums on two-point configurations") {
    KernelModel m = make_model();
    Configuration eta;
    eta.points = {Point{5.0, 0.0}, Point{6.5, 0.0}};
    // Both ordered pairs contribute; the pair rates are even in the
    // separation, so each total is twice the one-pair value.
    CHECK(total_attraction(m, eta) ==
          doctest::Approx(2.0 * m.phi_plus(Point{1.5, 0.0})).epsilon(1e-12));
    CHECK(total_repulsion(m, eta) ==
          doctest::Approx(2.0 * m.phi_minus(Point{1.5, 0.0})).epsilon(1e-12));
}

TEST_CASE("empty and singleton configurations") {
    KernelModel m = make_model();
    Configuration empty;
    CHECK(total_attraction(m, empty) == 0.0);
    CHECK(total_repulsion(m, empty) == 0.0);
    CHECK(total_activity(m, empty) == 0.0);
    Configuration one;
    one.points = {Point{3.0, 0.0}};
    CHECK(total_attraction(m, one) == 0.0);
    CHECK(total_activity(m, one) == doctest::Approx(m.m_a()).epsilon(1e-14));
}

TEST_CASE("permutation invariance of the pair sums") {
    KernelModel m = make_model();
    std::mt19937_64 rng(7);
    Configuration eta = random_configuration(m.grid(), 9, rng);
    double a0 = total_attraction(m, eta);
    double r0 = total_repulsion(m, eta);
    std::shuffle(eta.points.begin(), eta.points.end(), rng);
    CHECK(total_attraction(m, eta) == doctest::Approx(a0).epsilon(1e-12));
    CHECK(total_repulsion(m, eta) == doctest::Approx(r0).epsilon(1e-12));
}

TEST_CASE("activity identities") {
    KernelModel m = make_model();
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 2 + int(rng() % 8);
        Configuration eta = random_configuration(m.grid(), n, rng);
        double psi = total_activity(m, eta);
        CHECK(psi == doctest::Approx(n * m.m_a() + total_repulsion(m, eta))
                         .epsilon(1e-12));
        double omega = 0.7;
        CHECK(total_activity_shifted(m, eta, omega) ==
              doctest::Approx(psi + omega * n).epsilon(1e-12));
    }
}

TEST_CASE("repulsion_at matches a direct pair loop") {
    KernelModel m = make_model();
    std::mt19937_64 rng(13);
    Configuration eta = random_configuration(m.grid(), 8, rng);
    Point z{4.321, 0.0};
    double direct = 0.0;
    for (const Point& x : eta.points) direct += m.phi_minus(x, z);
    CHECK(repulsion_at(m, eta, z) == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("coincident clusters: closed-form pair sums") {
    KernelModel m = make_model();
    std::mt19937_64 rng(17);
    const int n = 6;
    Configuration eta = clustered_configuration(m.grid(), n, 0.0, rng);
    for (const Point& p : eta.points) CHECK(p[0] == eta.points[0][0]);
    CHECK(total_attraction(m, eta) ==
          doctest::Approx(n * (n - 1) * m.phi_plus_table()[0])
              .epsilon(1e-10));
    CHECK(total_repulsion(m, eta) ==
          doctest::Approx(n * (n - 1) * m.phi_minus_table()[0])
              .epsilon(1e-10));
}

TEST_CASE("random configurations are reproducible and in the box") {
    TorusGrid g(1, 20.0, 64);
    std::mt19937_64 rng1(23), rng2(23);
    Configuration a = random_configuration(g, 50, rng1);
    Configuration b = random_configuration(g, 50, rng2);
    REQUIRE(a.size() == 50);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.points[i][0] == b.points[i][0]);
        CHECK(a.points[i][0] >= 0.0);
        CHECK(a.points[i][0] < 20.0);
    }
}
