#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "stripcap/kernel.hpp"

using namespace stripcap;
using testing::make_segment;

namespace {

Segment transformed(const Segment& s, double angle, Vec2 shift) {
    double c = std::cos(angle), sn = std::sin(angle);
    auto rot = [&](Point p) { return Point{c * p.x - sn * p.y, sn * p.x + c * p.y} + shift; };
    return make_segment(rot(s.a), rot(s.b));
}

}  // namespace

TEST_CASE("log potential: observation at the segment midpoint") {
    double L = 0.1;
    Segment s = make_segment({-L / 2, 0.0}, {L / 2, 0.0});
    double expected = L * (std::log(L / 2) - 1.0);  // antiderivative x ln x - x
    CHECK(log_potential_integral({0.0, 0.0}, s) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("log potential: short far segment at unit distance is ~0") {
    Segment s = make_segment({-0.0005, 0.0}, {0.0005, 0.0});
    double v = log_potential_integral({0.0, 1.0}, s);
    CHECK(std::abs(v) < 1e-6);
}

TEST_CASE("normal field: subtended right angle") {
    double L = 0.1;
    Segment s = make_segment({-L / 2, 0.0}, {L / 2, 0.0});
    double v = normal_field_integral({0.0, 0.05}, {0.0, 1.0}, s);
    CHECK(v == doctest::Approx(2.0 * std::atan(1.0)).epsilon(1e-12));
}

TEST_CASE("normal field: principal value on the segment itself is 0") {
    Segment s = make_segment({0.0, 0.0}, {0.02, 0.0});
    CHECK(normal_field_integral(s.mid, s.normal, s) == 0.0);
}

TEST_CASE("both kernels match the quadrature oracle on random configurations") {
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::uniform_real_distribution<double> len(1e-4, 0.5);
    for (int trial = 0; trial < 300; ++trial) {
        Point a{coord(rng), coord(rng)};
        double angle = coord(rng) * 3.14159;
        double L = len(rng);
        Segment s = make_segment(a, a + Vec2{std::cos(angle), std::sin(angle)} * L);
        Point obs{coord(rng), coord(rng)};
        double dist = std::min((obs - s.a).norm(), (obs - s.b).norm());
        if (dist < 1e-6) continue;

        double i_closed = log_potential_integral(obs, s);
        double i_quad = testing::quad_log_potential(obs, s);
        CHECK(i_closed == doctest::Approx(i_quad).epsilon(1e-9));

        double na = coord(rng) * 3.14159;
        Vec2 nvec{std::cos(na), std::sin(na)};
        double j_closed = normal_field_integral(obs, nvec, s);
        double j_quad = testing::quad_normal_field(obs, nvec, s);
        CHECK(j_closed == doctest::Approx(j_quad).epsilon(1e-9));
    }
}

TEST_CASE("additivity: halves sum to the whole (obs off segment)") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        Point a{coord(rng), coord(rng)}, b{coord(rng), coord(rng)};
        if ((b - a).norm() < 1e-3) continue;
        Segment whole = make_segment(a, b);
        Segment lo = make_segment(a, whole.mid), hi = make_segment(whole.mid, b);
        Point obs{coord(rng), 1.5 + std::abs(coord(rng))};
        CHECK(log_potential_integral(obs, lo) + log_potential_integral(obs, hi) ==
              doctest::Approx(log_potential_integral(obs, whole)).epsilon(1e-12));
        Vec2 n{0.6, 0.8};
        CHECK(normal_field_integral(obs, n, lo) + normal_field_integral(obs, n, hi) ==
              doctest::Approx(normal_field_integral(obs, n, whole)).epsilon(1e-12));
    }
}

TEST_CASE("rigid-motion invariance") {
    Segment s = make_segment({0.1, 0.2}, {0.4, 0.25});
    Point obs{0.0, 0.5};
    Vec2 n{0.0, 1.0};
    double i0 = log_potential_integral(obs, s);
    double j0 = normal_field_integral(obs, n, s);
    for (double angle : {0.3, 1.2, 2.9}) {
        Vec2 shift{-0.7, 0.35};
        Segment st = transformed(s, angle, shift);
        double c = std::cos(angle), sn = std::sin(angle);
        Point obs_t{c * obs.x - sn * obs.y + shift.x, sn * obs.x + c * obs.y + shift.y};
        Vec2 n_t{c * n.x - sn * n.y, sn * n.x + c * n.y};
        CHECK(log_potential_integral(obs_t, st) == doctest::Approx(i0).epsilon(1e-12));
        CHECK(normal_field_integral(obs_t, n_t, st) == doctest::Approx(j0).epsilon(1e-12));
    }
}

TEST_CASE("scale law: I(alpha) = alpha (I + L ln alpha), J invariant") {
    Segment s = make_segment({0.1, 0.2}, {0.4, 0.25});
    Point obs{0.0, 0.5};
    Vec2 n{0.6, 0.8};
    double i0 = log_potential_integral(obs, s);
    double j0 = normal_field_integral(obs, n, s);
    for (double alpha : {0.01, 0.5, 3.0, 1000.0}) {
        Segment ss = make_segment(s.a * alpha, s.b * alpha);
        Point obs_s = obs * alpha;
        CHECK(log_potential_integral(obs_s, ss) ==
              doctest::Approx(alpha * (i0 + s.length * std::log(alpha))).epsilon(1e-12));
        CHECK(normal_field_integral(obs_s, n, ss) == doctest::Approx(j0).epsilon(1e-12));
    }
}
