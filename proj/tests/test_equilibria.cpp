#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "crn/dsl.hpp"
#include "crn/equilibria.hpp"
#include "testutil.hpp"

using namespace crn;

namespace {

KineticModel r0_model() {
    return KineticModel::make(parse_network("X + 2Y -> 3Y\nY -> X"), vecd({1.0, 1.0}));
}

}  // namespace

TEST_CASE("newton on a one-dimensional class") {
    KineticModel m = r0_model();
    // the anchor (2.5, 0.4) is itself the C = 2.9 equilibrium t+ = 2.5
    NewtonResult r = newton_on_class(m, vecd({2.5, 0.4}));
    REQUIRE(r.status == NewtonStatus::Converged);
    CHECK(r.point->x(0) == doctest::Approx(2.5).epsilon(1e-10));
    CHECK(r.point->x(1) == doctest::Approx(0.4).epsilon(1e-10));
    CHECK(r.point->x(0) * r.point->x(1) == doctest::Approx(1.0).epsilon(1e-10));

    // a different start on the same class reaches the other root t- = 0.4
    NewtonResult r2 = newton_on_class(m, vecd({0.5, 2.4}));
    REQUIRE(r2.status == NewtonStatus::Converged);
    CHECK(r2.point->x(0) * r2.point->x(1) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r2.point->x.sum() == doctest::Approx(2.9).epsilon(1e-12));
}

TEST_CASE("newton on R2 finds the unique positive equilibrium") {
    KineticModel m = KineticModel::make(parse_network("X + 2Y -> 3Y\nY -> X\n0 <-> X"),
                                        vecd({1.0, 1.0, 1.0, 1.0}));
    for (auto start : {vecd({10.0, 10.0}), vecd({2.0, 0.5}), vecd({1.5, 3.0})}) {
        NewtonResult r = newton_on_class(m, start);
        REQUIRE(r.status == NewtonStatus::Converged);
        CHECK(r.point->x(0) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(r.point->x(1) == doctest::Approx(1.0).epsilon(1e-9));
    }
    // basins draining to the boundary root (1, 0) are reported as escapes,
    // never as positive equilibria
    NewtonResult esc = newton_on_class(m, vecd({5.0, 0.2}));
    CHECK(esc.status == NewtonStatus::LeftPositiveOrthant);
    // the multistart view: exactly one positive equilibrium
    MultistartOptions opts;
    opts.seed = 5;
    CHECK(multistart_search(m, vecd({1.0, 1.0}), opts).size() == 1);
}

TEST_CASE("newton reports boundary escape when no positive equilibrium exists") {
    KineticModel m = KineticModel::make(parse_network("X + 2Y -> 3Y\nY + Z -> X"),
                                        vecd({1.0, 1.0}));
    NewtonResult r = newton_on_class(m, vecd({1.0, 1.0, 1.0}));
    CHECK(r.status != NewtonStatus::Converged);
}

TEST_CASE("multistart on R0 classes") {
    KineticModel m = r0_model();
    MultistartOptions opts;
    opts.seed = 17;
    auto found = multistart_search(m, vecd({1.5, 1.5}), opts);
    REQUIRE(found.size() == 2);
    double tp = (3.0 + std::sqrt(5.0)) / 2.0, tm = (3.0 - std::sqrt(5.0)) / 2.0;
    CHECK(found[0].x(0) == doctest::Approx(tm).epsilon(1e-9));
    CHECK(found[0].x(1) == doctest::Approx(tp).epsilon(1e-9));
    CHECK(found[1].x(0) == doctest::Approx(tp).epsilon(1e-9));

    // residuals and class membership
    for (const auto& p : found) {
        CHECK(p.classification.residual_norm <= 1e-10 * 3.0);
        CHECK(p.x.sum() == doctest::Approx(3.0).epsilon(1e-9));
    }
}

TEST_CASE("property: R0 classes have 2 equilibria for C > 2 and none for C < 2") {
    KineticModel m = r0_model();
    testutil::Rng rng(2024);
    std::uniform_real_distribution<double> above(2.05, 9.0), below(0.3, 1.95);
    MultistartOptions opts;
    opts.n_starts = 24;
    for (int iter = 0; iter < 25; ++iter) {
        double c1 = above(rng);
        opts.seed = 1000 + static_cast<std::uint64_t>(iter);
        CHECK(multistart_search(m, vecd({c1 / 2, c1 / 2}), opts).size() == 2);
        double c0 = below(rng);
        CHECK(multistart_search(m, vecd({c0 / 2, c0 / 2}), opts).empty());
    }
}

TEST_CASE("multistart determinism: serial equals parallel, repeats are identical") {
    KineticModel m = KineticModel::make(
        parse_network("X + 2Y -> 2X + 2Y\nX + 2Y -> 3Y\nY -> X\nX -> 0\n3X -> 4X"),
        vecd({1.0, 1.0, 1.0, 4.0, 1.0}));
    MultistartOptions opts;
    opts.seed = 99;
    auto a = multistart_search(m, vecd({1.0, 1.0}), opts);
    auto b = multistart_search_serial(m, vecd({1.0, 1.0}), opts);
    auto c = multistart_search(m, vecd({1.0, 1.0}), opts);
    REQUIRE(a.size() == b.size());
    REQUIRE(a.size() == c.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].x == b[i].x);  // bitwise: same starts, same solves, same merge
        CHECK(a[i].x == c[i].x);
    }
    CHECK(a.size() == 2);  // R4's two equilibria
}

TEST_CASE("compatibility checks") {
    auto st = stoichiometric_structure(parse_network("X + 2Y -> 3Y\nY -> X"));
    double tp = (3.0 + std::sqrt(5.0)) / 2.0, tm = (3.0 - std::sqrt(5.0)) / 2.0;
    CHECK(compatible(vecd({tp, tm}), vecd({tm, tp}), st).compatible);
    CHECK(!compatible(vecd({1.0, 1.0}), vecd({2.0, 3.0}), st).compatible);
    CHECK(compatible(vecd({1.0, 2.0}), vecd({1.0, 2.0}), st).compatible);
}

TEST_CASE("MPNE certificates") {
    KineticModel m = r0_model();
    double tp = (3.0 + std::sqrt(5.0)) / 2.0, tm = (3.0 - std::sqrt(5.0)) / 2.0;
    MpneCertificate cert = mpne_certificate(m, vecd({tp, tm}), vecd({tm, tp}));
    CHECK(cert.verdict == CertificateVerdict::MPNE);  // p is unstable, so not MPSE
    CHECK(cert.compat.compatible);
    CHECK(cert.distinct);

    MpneCertificate same = mpne_certificate(m, vecd({tp, tm}), vecd({tp, tm}));
    CHECK(same.verdict == CertificateVerdict::Failed);
    CHECK(same.failure_reason == "not distinct");

    MpneCertificate incomp = mpne_certificate(m, vecd({tp, tm}), vecd({2 * tm, 2 * tp}));
    CHECK(incomp.verdict == CertificateVerdict::Failed);
}

TEST_CASE("cascade cubic: coefficients and published roots") {
    std::array<double, 6> k = {1, 1, 1, 1, 3, 1};
    auto c = mapk_cubic_coefficients(k, 100.0, 600.0);
    CHECK(c[0] == doctest::Approx(-3.0));      // leading term -k1^2 k5 k6
    CHECK(c[1] == doctest::Approx(1188.0));
    CHECK(c[2] == doctest::Approx(-14012.0));
    CHECK(c[3] == doctest::Approx(7200.0));

    auto roots = cubic_positive_roots(c);
    REQUIRE(roots.size() == 3);
    CHECK(roots[0] == doctest::Approx(0.5384).epsilon(5e-4));
    CHECK(roots[1] == doctest::Approx(11.61).epsilon(5e-4));
    CHECK(roots[2] == doctest::Approx(383.8).epsilon(5e-4));

    // M = 0: x2 = N is a root (all substrate unphosphorylated)
    auto c0 = mapk_cubic_coefficients(k, 0.0, 600.0);
    double f600 = ((c0[0] * 600 + c0[1]) * 600 + c0[2]) * 600 + c0[3];
    CHECK(std::abs(f600) <= 1e-9 * std::abs(c0[0]) * 600 * 600 * 600);
    // N = 0: the constant term vanishes, so x2 = 0 is a root
    CHECK(mapk_cubic_coefficients(k, 100.0, 0.0)[3] == 0.0);
}

TEST_CASE("cascade lift satisfies the full system and the conservation laws") {
    std::array<double, 6> k = {1, 1, 1, 1, 3, 1};
    KineticModel m = KineticModel::make(
        parse_network("Y-pp + X -> Y-pp--X\nY-pp--X -> Y-pp + X\nY-pp--X -> Y-pp + X-p\n"
                      "Y-pp + X-p -> Y-pp + X-pp\nX-pp -> X-p\nX-p -> X"),
        vecd({1, 1, 1, 1, 3, 1}));
    auto roots = cubic_positive_roots(mapk_cubic_coefficients(k, 100.0, 600.0));
    REQUIRE(roots.size() == 3);
    // the published 4-significant-figure tables, states ordered by x2
    Eigen::VectorXd pub0 = vecd({78.79, 0.5384, 21.21, 21.21, 557.0});
    Eigen::VectorXd pub2 = vecd({0.5183, 383.8, 99.48, 99.48, 17.19});
    Eigen::VectorXd s0 = mapk_lift(roots[0], k, 100.0, 600.0);
    Eigen::VectorXd s2 = mapk_lift(roots[2], k, 100.0, 600.0);
    for (int i = 0; i < 5; ++i) {
        CHECK(s0(i) == doctest::Approx(pub0(i)).epsilon(6e-4));
        CHECK(s2(i) == doctest::Approx(pub2(i)).epsilon(6e-4));
    }
    for (const auto& s : {s0, s2}) {
        double scale = problem_scale(m, s);
        CHECK((m.structure.gamma_d * rate_vector(m, s)).norm() <= 1e-8 * scale);
        CHECK(s(0) + s(2) == doctest::Approx(100.0).epsilon(1e-12));
        CHECK(s(1) + s(2) + s(3) + s(4) == doctest::Approx(600.0).epsilon(1e-12));
    }
    // nonpositive lift is reported
    CHECK_THROWS_AS(mapk_lift(650.0, k, 100.0, 600.0), std::domain_error);
}
