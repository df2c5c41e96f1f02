#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "popdyn/numerics.hpp"

using namespace popdyn;

TEST_CASE("bracket_scan finds both quadratic roots") {
    // u^2 - 2.5u + 1 has roots 0.5 and 2
    const auto f = [](double u) { return u * u - 2.5 * u + 1.0; };
    const auto scan = num::bracket_scan(f, 0.0, 3.0, 300);
    REQUIRE(scan.brackets.size() == 2);
    // this grid hits both roots exactly, which must come back as degenerate
    // brackets rather than be dropped
    CHECK(scan.brackets[0].lo <= 0.5);
    CHECK(scan.brackets[0].hi >= 0.5);
    CHECK(scan.brackets[1].lo <= 2.0);
    CHECK(scan.brackets[1].hi >= 2.0);
    CHECK(scan.skipped_nonfinite == 0);

    // an off-grid scan brackets them strictly
    const auto scan2 = num::bracket_scan(f, 0.0, 3.0, 301);
    REQUIRE(scan2.brackets.size() == 2);
    CHECK(scan2.brackets[0].lo < 0.5);
    CHECK(scan2.brackets[0].hi > 0.5);
}

TEST_CASE("bracket_scan: monotone function gives exactly one bracket") {
    const auto f = [](double u) { return std::tanh(u - 1.0); };
    const auto scan = num::bracket_scan(f, 0.0, 3.0, 57);
    CHECK(scan.brackets.size() == 1);
}

TEST_CASE("bracket_scan skips non-finite cells with a count") {
    const auto f = [](double u) { return u < 0.5 ? std::nan("") : u - 1.0; };
    const auto scan = num::bracket_scan(f, 0.0, 2.0, 100);
    CHECK(scan.skipped_nonfinite > 0);
    REQUIRE(scan.brackets.size() == 1);
}

TEST_CASE("geometric scan reaches roots far below the linear grid") {
    // root at 1e-12
    const auto f = [](double u) { return std::log(u / 1e-12); };
    const auto scan = num::bracket_scan_geometric(f, 1.0);
    REQUIRE(!scan.brackets.empty());
    const auto res = num::refine_root(f, scan.brackets.front(), 1e-12);
    CHECK(res.converged);
    CHECK(res.root == doctest::Approx(1e-12).epsilon(1e-9));
}

TEST_CASE("refine_root hits quadratic roots to 1e-12") {
    const auto f = [](double u) { return u * u - 2.5 * u + 1.0; };
    const auto scan = num::bracket_scan(f, 0.0, 3.0, 300);
    const auto r0 = num::refine_root(f, scan.brackets[0], 1e-12);
    const auto r1 = num::refine_root(f, scan.brackets[1], 1e-12);
    CHECK(std::abs(r0.root - 0.5) < 1e-12);
    CHECK(std::abs(r1.root - 2.0) < 1e-12);
}

TEST_CASE("refine_root: cubic") {
    const auto f = [](double u) { return u * u * u - u; };
    const auto res = num::refine_root(f, {0.5, 2.0, f(0.5), f(2.0)}, 1e-13);
    CHECK(std::abs(res.root - 1.0) < 1e-12);
}

TEST_CASE("refine_root stays inside its bracket on random cubics") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    int tested = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const double a = coef(rng), b = coef(rng), c = coef(rng);
        const auto f = [&](double u) { return ((u + a) * u + b) * u + c; };
        const auto scan = num::bracket_scan(f, -4.0, 4.0, 64);
        for (const auto& br : scan.brackets) {
            if (br.degenerate()) continue;
            const auto res = num::refine_root(f, br, 1e-11);
            ++tested;
            REQUIRE(res.root >= br.lo);
            REQUIRE(res.root <= br.hi);
            REQUIRE(res.converged);
            REQUIRE(std::abs(f(res.root)) <= 1e-11);
        }
    }
    CHECK(tested > 10000);
}

TEST_CASE("descartes_bound counts sign alternations") {
    // b x^5 + x^2 - r x + 1 with b,r > 0: signs + + - +
    const double c1[] = {0.1, 0.0, 0.0, 1.0, -7.5, 1.0};
    CHECK(num::descartes_bound(c1) == 2);
    const double c2[] = {1.0, 2.0, 0.5};
    CHECK(num::descartes_bound(c2) == 0);
    const double c3[] = {1.0, -1.0, 1.0, -1.0};
    CHECK(num::descartes_bound(c3) == 3);
}

TEST_CASE("descartes bound dominates the positive-root count of random polynomials") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    std::uniform_int_distribution<int> deg(2, 6);
    for (int trial = 0; trial < 400; ++trial) {
        const int n = deg(rng);
        std::vector<double> cs(n + 1);
        for (auto& c : cs) c = coef(rng);
        if (cs[0] == 0.0) cs[0] = 1.0;
        const auto f = [&](double u) {
            double acc = 0.0;
            for (double c : cs) acc = acc * u + c;
            return acc;
        };
        const auto scan = num::bracket_scan(f, 1e-9, 50.0, 4096);
        int roots = 0;
        for (const auto& br : scan.brackets) {
            const auto res = num::refine_root(f, br, 1e-10);
            if (res.converged && res.root > 0.0) ++roots;
        }
        CHECK(roots <= num::descartes_bound(cs));
    }
}

TEST_CASE("cycle_detect") {
    std::vector<double> constant(64, 1.25);
    CHECK(num::cycle_detect(constant, 1e-12, 8) == 1);

    std::vector<double> two;
    for (int i = 0; i < 64; ++i) two.push_back(i % 2 ? 0.25 : 1.75);
    CHECK(num::cycle_detect(two, 1e-12, 8) == 2);

    std::vector<double> drift;
    for (int i = 0; i < 64; ++i) drift.push_back(0.01 * i);
    CHECK(!num::cycle_detect(drift, 1e-6, 8).has_value());

    // precondition: tail must cover 4 periods
    std::vector<double> shorttail(7, 1.0);
    CHECK(!num::cycle_detect(shorttail, 1e-12, 2).has_value());
}

TEST_CASE("lyapunov_1d sign on contracting maps") {
    // linear contraction toward 0.5: exponent = ln 0.4
    const auto f = [](double u) { return 0.5 + 0.4 * (u - 0.5); };
    const auto df = [](double) { return 0.4; };
    const auto res = num::lyapunov_1d(f, df, 0.9, 2000, 200);
    CHECK(res.exponent == doctest::Approx(std::log(0.4)).epsilon(1e-12));
    CHECK(res.skipped == 0);
}
