#include <doctest.h>

#include <elavg/geometry.hpp>

#include "test_util.hpp"

#include <cmath>
#include <random>

using namespace elavg;
using testutil::polyline2;
using testutil::v2;

TEST_CASE("length of singleton, L-shape and inscribed polygon") {
    CHECK(length(Polyline{{v2(0, 0)}}) == 0.0);
    CHECK(length(polyline2({{0, 0}, {1, 0}, {1, 1}})) == doctest::Approx(2.0));

    const Polyline gon = testutil::inscribed_polygon(360, 1.0);
    CHECK(length(gon) ==
          doctest::Approx(2 * 360 * std::sin(M_PI / 360)).epsilon(1e-12));
}

TEST_CASE("project_point: perpendicular foot, clamped endpoint, tie-break") {
    const Polyline seg = polyline2({{0, 0}, {2, 0}});

    ProjectionAssignment a = project_point(v2(1, 1), seg);
    CHECK(a.segment == 0);
    CHECK(a.t == doctest::Approx(0.5));
    CHECK(a.foot.isApprox(v2(1, 0)));
    CHECK(a.distance == doctest::Approx(1.0));

    ProjectionAssignment b = project_point(v2(3, 0), seg);
    CHECK(b.t == 1.0);
    CHECK(b.foot.isApprox(v2(2, 0)));
    CHECK(b.distance == doctest::Approx(1.0));

    const Polyline bent = polyline2({{-1, 0}, {0, 0}, {1, 0}});
    ProjectionAssignment c = project_point(v2(0, 1), bent);
    CHECK(c.segment == 0);
    CHECK(c.t == 1.0);
    CHECK(c.foot.isApprox(v2(0, 0)));
}

TEST_CASE("project_point beats every node and handles singleton curves") {
    std::mt19937_64 eng(7);
    const Polyline curve = polyline2({{0, 0}, {1, 0.2}, {1.5, 1}, {0.7, 1.4}});
    for (int trial = 0; trial < 50; ++trial) {
        const Vec y = v2(testutil::uniform(eng, -1, 3), testutil::uniform(eng, -1, 3));
        const ProjectionAssignment a = project_point(y, curve);
        for (const Vec& node : curve.nodes)
            CHECK(a.distance <= (y - node).norm() + 1e-15);
        CHECK(a.foot.isApprox((1 - a.t) * curve.nodes[a.segment] +
                              a.t * curve.nodes[a.segment + 1]));
    }
    const ProjectionAssignment s = project_point(v2(3, 4), Polyline{{v2(0, 0)}});
    CHECK(s.distance == doctest::Approx(5.0));
    CHECK(s.segment == 0);
    CHECK(s.t == 0.0);
}

TEST_CASE("tangents") {
    const auto t1 = tangents(polyline2({{0, 0}, {2, 0}}));
    REQUIRE(t1.size() == 1);
    CHECK(t1[0].isApprox(v2(1, 0)));

    const auto t2 = tangents(polyline2({{0, 0}, {1, 0}, {1, 1}}));
    REQUIRE(t2.size() == 2);
    CHECK(t2[0].isApprox(v2(1, 0)));
    CHECK(t2[1].isApprox(v2(0, 1)));
    CHECK(std::acos(t2[0].dot(t2[1])) == doctest::Approx(M_PI / 2));

    for (const Vec& u : t2) CHECK(std::abs(u.norm() - 1.0) < 1e-12);

    CHECK_THROWS_AS((void)tangents(Polyline{{v2(0, 0)}}), std::invalid_argument);
}

TEST_CASE("turning_angles") {
    CHECK(turning_angles(polyline2({{0, 0}, {1, 0}, {2, 0}}))[0] ==
          doctest::Approx(0.0));
    CHECK(turning_angles(polyline2({{0, 0}, {1, 0}, {1, 1}}))[0] ==
          doctest::Approx(M_PI / 2));

    const int n = 12;
    const auto angles = turning_angles(testutil::inscribed_polygon(n, 2.0));
    for (const double a : angles) CHECK(a == doctest::Approx(2 * M_PI / n));

    CHECK_THROWS_AS((void)turning_angles(polyline2({{0, 0}, {1, 0}})),
                    std::invalid_argument);
}

TEST_CASE("discrete curvature: straight lines, polygons, right angle") {
    CHECK(discrete_curvature_term(polyline2({{0, 0}, {1, 0}, {2, 0}, {3.5, 0}})) ==
          0.0);
    CHECK(discrete_curvature_term(Polyline{{v2(1, 2)}}) == 0.0);

    // closed-form polygon sum N (2 pi / N)^2 / (2 r sin(pi / N))
    for (const double r : {1.0, 2.5}) {
        const int n = 360;
        const Polyline gon = testutil::inscribed_polygon_wrapped(n, r);
        const double expect =
            n * std::pow(2 * M_PI / n, 2) / (2 * r * std::sin(M_PI / n));
        CHECK(discrete_curvature_term(gon) == doctest::Approx(expect).epsilon(1e-10));
        CHECK(std::abs(discrete_curvature_term(gon) - 2 * M_PI / r) <
              1e-3 * (2 * M_PI / r));
    }

    CHECK(discrete_curvature_term(polyline2({{0, 0}, {1, 0}, {1, 1}})) ==
          doctest::Approx(M_PI * M_PI / 4));
}

TEST_CASE("angle-chord inequalities for consecutive tangents") {
    std::mt19937_64 eng(11);
    for (int trial = 0; trial < 200; ++trial) {
        Vec u1 = v2(testutil::uniform(eng, -1, 1), testutil::uniform(eng, -1, 1));
        Vec u2 = v2(testutil::uniform(eng, -1, 1), testutil::uniform(eng, -1, 1));
        if (u1.norm() < 1e-3 || u2.norm() < 1e-3) continue;
        u1.normalize();
        u2.normalize();
        const double theta = std::acos(std::clamp(u1.dot(u2), -1.0, 1.0));
        const double chord = (u1 - u2).norm();
        CHECK(std::abs(chord - 2 * std::sin(theta / 2)) < 1e-12);
        CHECK(0.5 * theta <= chord + 1e-12);
        CHECK(chord <= theta + 1e-12);
    }
}

TEST_CASE("curvature term is rigid-motion invariant and scales as 1/r") {
    const Polyline base = polyline2({{0, 0}, {1, 0.1}, {1.8, 0.7}, {2.0, 1.5}, {1.2, 2.0}});
    const double k0 = discrete_curvature_term(base);

    const double phi = 0.83;
    Eigen::Matrix2d rot;
    rot << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
    Polyline moved = base;
    for (Vec& p : moved.nodes) p = rot * p + v2(5, -3);
    CHECK(std::abs(discrete_curvature_term(moved) - k0) < 1e-10 * k0);

    for (const double r : {0.25, 3.0}) {
        Polyline scaled = base;
        for (Vec& p : scaled.nodes) p *= r;
        CHECK(discrete_curvature_term(scaled) == doctest::Approx(k0 / r).epsilon(1e-12));
    }
}

TEST_CASE("resample: arc-length placement, endpoints, idempotence") {
    const Polyline seg = polyline2({{0, 0}, {2, 0}});
    const Polyline seg3 = resample(seg, 3);
    REQUIRE(seg3.size() == 3);
    CHECK(seg3.nodes[1].isApprox(v2(1, 0)));

    const Polyline bend = polyline2({{0, 0}, {1, 0}, {1, 1}});
    const Polyline two = resample(bend, 2);
    REQUIRE(two.size() == 2);
    CHECK(two.nodes[0] == v2(0, 0));
    CHECK(two.nodes[1] == v2(1, 1));

    // idempotent whenever the output is uniform in its own arc length:
    // straight inputs, and a regular polygon resampled onto its own vertices
    const Polyline line100 = resample(polyline2({{0, 0}, {2, 1}}), 100);
    const Polyline line100b = resample(line100, 100);
    REQUIRE(line100.size() == line100b.size());
    for (std::size_t i = 0; i < line100.size(); ++i)
        CHECK(line100.nodes[i] == line100b.nodes[i]); // bitwise

    const Polyline gon = testutil::inscribed_polygon(37, 1.3);
    const Polyline once = resample(gon, 38);
    const Polyline twice = resample(once, 38);
    REQUIRE(once.size() == twice.size());
    for (std::size_t i = 0; i < once.size(); ++i)
        CHECK(once.nodes[i] == twice.nodes[i]); // bitwise

    // across corners the fixed point is only approximate
    const Polyline dense = resample(gon, 100);
    CHECK(curve_metric(dense, resample(dense, 100)) < 1e-3 * length(gon));

    CHECK(length(once) <= length(gon) + 1e-15);
    CHECK(length(dense) <= length(gon) + 1e-15);
    CHECK_THROWS_AS((void)resample(Polyline{{v2(0, 0)}}, 4), std::invalid_argument);
}

TEST_CASE("resampled length converges at order 1/n^2 on circle arcs") {
    auto arc = [](int n) {
        Polyline c;
        for (int j = 0; j <= n; ++j) {
            const double phi = M_PI * j / n; // half circle, radius 1
            c.nodes.push_back(v2(std::cos(phi), std::sin(phi)));
        }
        return c;
    };
    const Polyline fine = arc(4096);
    const double l_true = length(fine);
    const double err_32 = std::abs(length(resample(fine, 33)) - l_true);
    const double err_128 = std::abs(length(resample(fine, 129)) - l_true);
    CHECK(err_128 < err_32 / 8.0); // ~1/16 expected
}

TEST_CASE("curve_metric: identity, reversal, offset, metric axioms") {
    const Polyline a = polyline2({{0, 0}, {0.5, 0.2}, {1, 0}});
    CHECK(curve_metric(a, a) == 0.0);
    CHECK(curve_metric(a, reversed(a)) < 1e-12);

    const double delta = 0.37;
    const Polyline s1 = polyline2({{0, 0}, {1, 0}});
    const Polyline s2 = polyline2({{0, delta}, {1, delta}});
    CHECK(curve_metric(s1, s2) == doctest::Approx(delta).epsilon(1e-12));

    std::mt19937_64 eng(23);
    auto random_curve = [&eng]() {
        Polyline c;
        double x = 0, y = 0;
        c.nodes.push_back(v2(x, y));
        for (int i = 0; i < 5; ++i) {
            x += testutil::uniform(eng, 0.1, 1.0);
            y += testutil::uniform(eng, -0.5, 0.5);
            c.nodes.push_back(v2(x, y));
        }
        return c;
    };
    for (int trial = 0; trial < 20; ++trial) {
        const Polyline p = random_curve();
        const Polyline q = random_curve();
        const Polyline r = random_curve();
        const double pq = curve_metric(p, q);
        const double qp = curve_metric(q, p);
        CHECK(pq == doctest::Approx(qp).epsilon(1e-12));
        CHECK(pq <= curve_metric(p, r) + curve_metric(r, q) + 1e-12);
    }
}

TEST_CASE("confinement_check") {
    std::vector<Vec> pts = {v2(0, 0), v2(1, 0), v2(0.5, 1)};
    const WeightedPointCloud cloud = WeightedPointCloud::with_unit_weights(pts);
    const EnergyParams params = EnergyParams::for_cloud(cloud, 0.5, 0.01, 2.0);

    const Polyline inside = polyline2({{0, 0}, {0.5, 0.5}, {1, 0.8}});
    CHECK(confinement_check(inside, cloud, params).ok);

    const double radius = params.diam + std::pow(params.diam, params.p) / params.lambda;
    const Polyline far = polyline2({{0, 0}, {10 * radius + 10, 0}});
    const ConfinementResult bad = confinement_check(far, cloud, params);
    CHECK_FALSE(bad.ok);
    CHECK(bad.max_violation > 0);

    const WeightedPointCloud atom =
        WeightedPointCloud::with_unit_weights({v2(2, 3), v2(2, 3)});
    const EnergyParams ap = EnergyParams::for_cloud(atom, 1.0, 1.0, 1.0);
    const ConfinementResult ok = confinement_check(Polyline{{v2(2, 3)}}, atom, ap);
    CHECK(ok.ok);
    CHECK(ok.max_violation == 0.0);
}

TEST_CASE("merge_close_nodes keeps endpoints and drops tiny edges") {
    Polyline c = polyline2({{0, 0}, {0.5, 0}, {0.5 + 1e-12, 0}, {1, 0}});
    const Polyline merged = merge_close_nodes(c, 1e-9);
    REQUIRE(merged.size() == 3);
    CHECK(merged.nodes.front() == v2(0, 0));
    CHECK(merged.nodes.back() == v2(1, 0));

    const Polyline collapsed = merge_close_nodes(polyline2({{0, 0}, {1e-12, 0}}), 1e-9);
    CHECK(collapsed.size() == 1);
}

TEST_CASE("EnergyParams derived constants") {
    // diam = 1 -> D = 2; p = 1 -> theta = 1; lambda = epsilon = 1 -> Y = sqrt(6)
    const WeightedPointCloud cloud =
        WeightedPointCloud::with_unit_weights({v2(0, 0), v2(1, 0)});
    const EnergyParams params = EnergyParams::for_cloud(cloud, 1.0, 1.0, 1.0);
    CHECK(params.diam == doctest::Approx(1.0));
    CHECK(params.D == doctest::Approx(2.0));
    CHECK(params.theta == doctest::Approx(1.0));
    CHECK(params.Y == doctest::Approx(std::sqrt(6.0)).epsilon(1e-14));

    CHECK_THROWS_AS(EnergyParams::for_cloud(cloud, 0.0, 1.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(EnergyParams::for_cloud(cloud, 1.0, -1.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(EnergyParams::for_cloud(cloud, 1.0, 1.0, 0.5),
                    std::invalid_argument);
}

TEST_CASE("WeightedPointCloud validation and caches") {
    CHECK_THROWS_AS(WeightedPointCloud({v2(0, 0)}, {-1.0}), std::invalid_argument);
    CHECK_THROWS_AS(WeightedPointCloud({v2(0, 0)}, {0.0}), std::invalid_argument);

    const WeightedPointCloud c({v2(0, 0), v2(3, 4), v2(100, 100)}, {1.0, 2.0, 0.0});
    CHECK(c.total_mass() == doctest::Approx(3.0));
    CHECK(c.diameter() == doctest::Approx(5.0)); // zero-weight point ignored
}
