#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lar/quadrature.hpp"
#include "lar/rng.hpp"
#include "lar/simplex.hpp"

using namespace lar;

namespace {

// Frozen by the quadrature oracle ahead of the implementation: holonomy of the
// canonical skew witness (n = 3, F_01 = -F_10 = 1, Fisher-Rao circle of radius
// 0.05 around the uniform lottery, library tangent frame). Equals
// -2*pi*sin^2(0.025)/sqrt(3).
constexpr double kSkewWitnessHolonomy = -2.2667769010685200e-03;

Mat skew_witness_3() {
    Mat f(3, 3);
    f(0, 1) = 1.0;
    f(1, 0) = -1.0;
    return f;
}

// Independent oracle: integrate <V rho, drho/dtheta> along the exact circle
// (no spline, no library quadrature path).
double holonomy_oracle(const Mat& evaluator, double radius) {
    const double r0 = 1.0 / std::sqrt(3.0);
    const Vec rho0{r0, r0, r0};
    Vec u(3), v(3);
    {
        Vec w{1 - rho0[0] * rho0[0], -rho0[0] * rho0[1], -rho0[0] * rho0[2]};
        const double n = norm2(w);
        for (int i = 0; i < 3; ++i) u[i] = w[i] / n;
    }
    {
        Vec w{-rho0[1] * rho0[0], 1 - rho0[1] * rho0[1], -rho0[1] * rho0[2]};
        const double d = dot(w, u);
        for (int i = 0; i < 3; ++i) w[i] -= d * u[i];
        const double n = norm2(w);
        for (int i = 0; i < 3; ++i) v[i] = w[i] / n;
    }
    const double c = std::cos(radius / 2), s = std::sin(radius / 2);
    auto f = [&](double th) {
        Vec rho(3), drho(3);
        for (int i = 0; i < 3; ++i) {
            rho[i] = c * rho0[i] + s * (std::cos(th) * u[i] + std::sin(th) * v[i]);
            drho[i] = s * (-std::sin(th) * u[i] + std::cos(th) * v[i]);
        }
        return dot(evaluator * rho, drho);
    };
    return integrate(f, 0.0, 2.0 * std::numbers::pi, 16, 64);
}

}  // namespace

TEST_CASE("readout and lift") {
    const Lottery flat = readout(Vec{1.0, 1.0});
    CHECK(flat[0] == doctest::Approx(0.5));
    CHECK(flat[1] == doctest::Approx(0.5));

    const Lottery signed_case = readout(Vec{-2.0, 0.0, 2.0});
    CHECK(signed_case[0] == doctest::Approx(0.5));
    CHECK(signed_case[1] == 0.0);
    CHECK(signed_case[2] == doctest::Approx(0.5));

    const Lottery q(Vec{0.2, 0.3, 0.5});
    const Lottery round = readout(lift(q).rho());
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(round[i] - q[i]) <= 1e-15);

    CHECK_THROWS_AS((void)lift(Lottery(Vec{1.0, 0.0})), std::domain_error);
    CHECK_THROWS_AS((void)readout(Vec{0.0, 0.0}), std::domain_error);
}

TEST_CASE("fisher_rao_inner") {
    const Lottery q(Vec{0.5, 0.5});
    const TangentVec v(Vec{1.0, -1.0});
    CHECK(fisher_rao_inner(q, v, v) == doctest::Approx(4.0));
    CHECK(fisher_rao_inner(q, TangentVec(Vec{0.0, 0.0}), v) == 0.0);

    // boundary lotteries are refused, not regularized
    const Lottery edge(Vec{1.0, 0.0});
    CHECK_THROWS_AS((void)fisher_rao_inner(edge, v, v), std::domain_error);
    CHECK_THROWS_AS((void)beta_eval(edge, v, Mat::identity(2)), std::domain_error);
    CHECK_THROWS_AS((void)simplex_drift(edge, Mat::identity(2)), std::domain_error);

    // pullback identity g_F(v, v) = 4 || d(lift) v ||^2
    XorShift64 rng(3);
    for (int k = 0; k < 30; ++k) {
        Vec raw = random_vector(rng, 4);
        double mean = 0;
        for (double x : raw) mean += x / 4.0;
        for (double& x : raw) x -= mean;
        Vec probs = random_vector(rng, 4, 0.2);
        double sum = 0;
        for (double& p : probs) {
            p = 0.3 + p;
            sum += p;
        }
        for (double& p : probs) p /= sum;
        const Lottery q4(probs);
        const TangentVec tv(raw, 1e-9);
        double push = 0;
        for (std::size_t i = 0; i < 4; ++i) {
            const double d = raw[i] / (2.0 * std::sqrt(probs[i]));
            push += d * d;
        }
        CHECK(fisher_rao_inner(q4, tv, tv) == doctest::Approx(4.0 * push).epsilon(1e-12));
    }
}

TEST_CASE("perceptual_distance") {
    const Lottery q(Vec{0.3, 0.7});
    CHECK(perceptual_distance(q, q) == doctest::Approx(0.0));
    CHECK(perceptual_distance(Lottery(Vec{1.0, 0.0}), Lottery(Vec{0.0, 1.0})) ==
          doctest::Approx(std::numbers::pi / 2));

    XorShift64 rng(17);
    auto random_lottery = [&rng](std::size_t n) {
        Vec p(n);
        double sum = 0;
        for (double& x : p) {
            x = 0.05 + rng.next_unit();
            sum += x;
        }
        for (double& x : p) x /= sum;
        return Lottery(p);
    };
    for (int k = 0; k < 1000; ++k) {
        const Lottery a = random_lottery(3), b = random_lottery(3), c = random_lottery(3);
        const double ab = perceptual_distance(a, b);
        const double bc = perceptual_distance(b, c);
        const double ac = perceptual_distance(a, c);
        CHECK(ac <= ab + bc + 1e-12);
        CHECK(ab == doctest::Approx(perceptual_distance(b, a)));
    }

    // equals the spherical geodesic distance of the lifted points (c = 1)
    const Lottery a(Vec{0.2, 0.3, 0.5}), b(Vec{0.6, 0.1, 0.3});
    const double cosang = dot(lift(a).rho(), lift(b).rho());
    CHECK(perceptual_distance(a, b) == doctest::Approx(std::acos(cosang)).epsilon(1e-14));
}

TEST_CASE("utility_potential") {
    CHECK(utility_potential(Lottery(Vec{0.5, 0.5}), Mat::diagonal(Vec{2.0, 4.0})) ==
          doctest::Approx(1.5));
    CHECK(utility_potential(Lottery(Vec{0.4, 0.6}), Mat(2, 2)) == 0.0);
    const Mat gauge = 3.0 * Mat::identity(4);
    CHECK(utility_potential(Lottery(Vec{0.1, 0.2, 0.3, 0.4}), gauge) ==
          doctest::Approx(1.5).epsilon(1e-14));
    Mat asym(2, 2);
    asym(0, 1) = 1.0;
    CHECK_THROWS_AS((void)utility_potential(Lottery(Vec{0.5, 0.5}), asym), std::domain_error);
}

TEST_CASE("beta_eval") {
    const Lottery q(Vec{0.2, 0.5, 0.3});
    const TangentVec v(Vec{0.4, -0.1, -0.3});

    // gauge: identity evaluator scores every redistribution zero
    CHECK(std::abs(beta_eval(q, v, Mat::identity(3))) <= 1e-15);

    // symmetric channel is the differential of the utility potential
    XorShift64 rng(29);
    const Mat s = random_matrix(rng, 3, MatrixFamily::Symmetric);
    const double h = 1e-5;
    auto shifted = [&](double step) {
        Vec p(3);
        for (std::size_t i = 0; i < 3; ++i) p[i] = q[i] + step * v[i];
        return utility_potential(Lottery(p, 1e-9), s);
    };
    const double fd = (shifted(h) - shifted(-h)) / (2.0 * h);
    CHECK(std::abs(beta_eval(q, v, s) - fd) < 1e-8);

    // skew channel: direct formula at the uniform lottery
    const Mat f = skew_witness_3();
    const Lottery uq = Lottery::uniform(3);
    const TangentVec uv(Vec{1.0, -1.0, 0.0});
    const double r = 1.0 / std::sqrt(3.0);
    const Vec frho{r * f(0, 1), r * f(1, 0), 0.0};
    double expect = 0;
    for (std::size_t i = 0; i < 3; ++i) expect += frho[i] * uv[i] / (2.0 * r);
    CHECK(beta_eval(uq, uv, f) == doctest::Approx(expect).epsilon(1e-14));

    // channel additivity
    for (int k = 0; k < 20; ++k) {
        const Mat m = random_matrix(rng, 3, MatrixFamily::General);
        const auto [ms, mf] = sym_skew_split(m);
        const double whole = beta_eval(q, v, m);
        const double parts = beta_eval(q, v, ms) + beta_eval(q, v, mf);
        CHECK(std::abs(whole - parts) <= 1e-14 * (1.0 + std::abs(whole)));
    }
}

TEST_CASE("ssb_regret") {
    const Mat f2 = [] {
        Mat f(2, 2);
        f(0, 1) = 1.0;
        f(1, 0) = -1.0;
        return f;
    }();
    CHECK(ssb_regret(Vec{1.0, 0.0}, Vec{0.0, 1.0}, f2) == doctest::Approx(1.0));
    CHECK(ssb_regret(Vec{0.3, 0.8}, Vec{0.3, 0.8}, f2) == doctest::Approx(0.0));

    XorShift64 rng(31);
    const Mat f = random_matrix(rng, 4, MatrixFamily::Skew);
    for (int k = 0; k < 50; ++k) {
        const Vec a = random_vector(rng, 4), b = random_vector(rng, 4);
        CHECK(std::abs(ssb_regret(a, b, f) + ssb_regret(b, a, f)) <= 1e-14);
    }
    CHECK_THROWS_AS((void)ssb_regret(Vec{1, 0}, Vec{0, 1}, Mat::identity(2)), std::domain_error);
}

TEST_CASE("loop_holonomy: exact channel vanishes") {
    XorShift64 rng(41);
    for (int k = 0; k < 10; ++k) {
        const std::size_t n = 3 + (k % 3);
        const Mat s = random_matrix(rng, n, MatrixFamily::Symmetric);
        Vec center(n);
        double sum = 0;
        for (double& c : center) {
            c = 0.4 + rng.next_unit();
            sum += c;
        }
        for (double& c : center) c /= sum;
        const double radius = 0.02 + 0.08 * rng.next_unit();
        const auto loop = fisher_circle(Lottery(center), radius, 96);
        const Holonomy h = loop_holonomy(loop, s);
        CHECK(std::abs(h.value) <= 1e-8);
    }
}

TEST_CASE("loop_holonomy: constant loop") {
    const std::vector<Vec> still(8, Vec{0.25, 0.25, 0.25, 0.25});
    const Holonomy h = loop_holonomy(still, Mat::identity(4));
    CHECK(h.value == 0.0);
}

TEST_CASE("skew channel is divergence-free in the discrete sense") {
    // flux average of the skew channel over small Fisher-Rao circles: outward
    // radial component of beta^F, averaged over the circle, vanishes as eps^2
    XorShift64 rng(61);
    for (int rep = 0; rep < 6; ++rep) {
        const Mat f = random_matrix(rng, 3, MatrixFamily::Skew);
        Vec center(3);
        double sum = 0;
        for (double& c : center) {
            c = 0.4 + rng.next_unit();
            sum += c;
        }
        for (double& c : center) c /= sum;
        Vec rho0(3);
        for (int i = 0; i < 3; ++i) rho0[i] = std::sqrt(center[i]);

        auto flux_average = [&](double eps) {
            // radial FR-unit direction is d(rho)/d(eps) lifted from the circle
            Vec u(3), v(3);
            {
                Vec w{1 - rho0[0] * rho0[0], -rho0[0] * rho0[1], -rho0[0] * rho0[2]};
                const double n = norm2(w);
                for (int i = 0; i < 3; ++i) u[i] = w[i] / n;
            }
            {
                Vec w{-rho0[1] * rho0[0], 1 - rho0[1] * rho0[1], -rho0[1] * rho0[2]};
                const double d = dot(w, u);
                for (int i = 0; i < 3; ++i) w[i] -= d * u[i];
                const double n = norm2(w);
                for (int i = 0; i < 3; ++i) v[i] = w[i] / n;
            }
            const double c = std::cos(eps / 2), s = std::sin(eps / 2);
            auto integrand = [&](double th) {
                Vec rho(3), radial(3);
                for (int i = 0; i < 3; ++i) {
                    const double w = std::cos(th) * u[i] + std::sin(th) * v[i];
                    rho[i] = c * rho0[i] + s * w;
                    radial[i] = 0.5 * (-s * rho0[i] + c * w);
                }
                return dot(f * rho, radial);
            };
            return integrate(integrand, 0.0, 2.0 * std::numbers::pi, 8, 32) /
                   (2.0 * std::numbers::pi);
        };

        // identically zero for the ambient-linear class; certainly O(eps^2)
        CHECK(std::abs(flux_average(0.05)) <= 1e-12);
        CHECK(std::abs(flux_average(0.025)) <= 1e-12);
    }
}

TEST_CASE("loop_holonomy: frozen skew witness and scaling") {
    const Mat f = skew_witness_3();

    // the independent quadrature oracle reproduces the frozen value
    CHECK(std::abs(holonomy_oracle(f, 0.05) - kSkewWitnessHolonomy) <= 1e-12);

    const auto loop = fisher_circle(Lottery::uniform(3), 0.05, 256);
    const Holonomy h = loop_holonomy(loop, f);
    CHECK(std::abs(h.value - kSkewWitnessHolonomy) <= 1e-8);
    CHECK(h.value != 0.0);
    CHECK(h.error_estimate <= 1e-10);

    const auto half_loop = fisher_circle(Lottery::uniform(3), 0.025, 256);
    const Holonomy h2 = loop_holonomy(half_loop, f);
    const double ratio = h.value / h2.value;
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.10));
}

TEST_CASE("loop_holonomy input validation") {
    const Mat f = skew_witness_3();
    auto open_loop = fisher_circle(Lottery::uniform(3), 0.05, 32);
    open_loop.back()[0] += 1e-6;
    open_loop.back()[1] -= 1e-6;
    CHECK_THROWS_AS((void)loop_holonomy(open_loop, f), std::invalid_argument);

    // a sample touching the boundary is rejected, not patched
    const double tiny = 1e-12;
    const std::vector<Vec> grazing{{0.5, 0.3, 0.2},
                                   {tiny, 0.5 - tiny, 0.5},
                                   {0.3, 0.4, 0.3},
                                   {0.2, 0.3, 0.5},
                                   {0.5, 0.3, 0.2}};
    CHECK_THROWS_AS((void)loop_holonomy(grazing, f), std::domain_error);
}

TEST_CASE("simplex_drift") {
    // gauge: multiples of the identity do not move the lottery
    const TangentVec zero = simplex_drift(Lottery(Vec{0.2, 0.3, 0.5}),
                                          2.0 * Mat::identity(3));
    CHECK(max_abs(zero.comps()) <= 1e-15);

    // replicator form for a diagonal evaluator
    const TangentVec rep = simplex_drift(Lottery(Vec{0.5, 0.5}), Mat::diagonal(Vec{1.0, 0.0}));
    CHECK(rep[0] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(rep[1] == doctest::Approx(-0.5).epsilon(1e-13));

    // duality against beta: g_F(drift, w) = 4 beta(w)
    XorShift64 rng(53);
    for (int k = 0; k < 25; ++k) {
        const Mat v = random_matrix(rng, 4, MatrixFamily::General);
        Vec probs = {0.1, 0.2, 0.3, 0.4};
        const Lottery q(probs);
        Vec raw = random_vector(rng, 4);
        double mean = 0;
        for (double x : raw) mean += x / 4.0;
        for (double& x : raw) x -= mean;
        const TangentVec w(raw, 1e-9);

        const TangentVec drift = simplex_drift(q, v);
        double sum = 0;
        for (double d : drift.comps()) sum += d;
        CHECK(std::abs(sum) <= 1e-13);
        CHECK(fisher_rao_inner(q, drift, w) ==
              doctest::Approx(4.0 * beta_eval(q, w, v)).epsilon(1e-11));
    }
}

TEST_CASE("fisher_circle radius and closure") {
    const Lottery center(Vec{0.2, 0.45, 0.35});
    const double radius = 0.06;
    const auto loop = fisher_circle(center, radius, 64);
    CHECK(loop.size() == 64);
    CHECK(loop.front() == loop.back());
    for (std::size_t k = 0; k + 1 < loop.size(); k += 7) {
        // Fisher-Rao distance is twice the lifted spherical distance
        const double d = 2.0 * perceptual_distance(center, Lottery(loop[k]));
        CHECK(d == doctest::Approx(radius).epsilon(1e-10));
    }
}

TEST_CASE("traceless_gauge") {
    XorShift64 rng(8);
    const Mat v = random_matrix(rng, 3, MatrixFamily::General);
    const Mat g = traceless_gauge(v);
    double tr = 0;
    for (std::size_t i = 0; i < 3; ++i) tr += g(i, i);
    CHECK(std::abs(tr) <= 1e-15);
    CHECK(std::abs(g(0, 1) - v(0, 1)) == 0.0);
}
