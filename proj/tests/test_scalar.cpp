#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "popdyn/scalar_analysis.hpp"
#include "popdyn/scalar_model.hpp"

using namespace popdyn;

namespace {

// independent oracle: fixed points of H by a plain sign scan on a dense grid
std::vector<double> sign_scan_roots(const ScalarModel& m, double hi, int n) {
    std::vector<double> roots;
    double up = hi / n;
    double gp = m.step(up) - up;
    for (int i = 2; i <= n; ++i) {
        const double u = hi * i / n;
        const double g = m.step(u) - u;
        if (gp != 0.0 && g != 0.0 && std::signbit(gp) != std::signbit(g)) {
            double lo = up, hh = u;
            for (int k = 0; k < 80; ++k) {
                const double mid = 0.5 * (lo + hh);
                const double gm = m.step(mid) - mid;
                if (std::signbit(gm) == std::signbit(gp)) lo = mid;
                else hh = mid;
            }
            roots.push_back(0.5 * (lo + hh));
        }
        up = u;
        gp = g;
    }
    return roots;
}

}  // namespace

TEST_CASE("construction rejects nonpositive parameters") {
    CHECK_THROWS_AS(ScalarModel::sigmoid_bh(0.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(ScalarModel::sigmoid_bh(2.5, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(ScalarModel::mss(7.5, 2.0, 0.0, 5.0), std::invalid_argument);
    CHECK_THROWS_AS(ScalarModel::scaled_bh(2.5, 0.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(ScalarModel::elaydi_sacker(1.0, 1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("H(0) = 0 for every family") {
    const ScalarModel models[] = {
        ScalarModel::sigmoid_bh(2.5, 2.0),     ScalarModel::sigmoid_bh(2.5, 0.5),
        ScalarModel::scaled_bh(3.0, 2.0, 2.0), ScalarModel::elaydi_sacker(2.0, 0.5, 1.0, 1.0),
        ScalarModel::ricker_allee(1.0, 1.5, 9.0), ScalarModel::mss(7.5, 2.0, 0.1, 5.0),
    };
    for (const auto& m : models) CHECK(m.step(0.0) == 0.0);
}

TEST_CASE("step values") {
    const auto sig = ScalarModel::sigmoid_bh(2.5, 2.0);
    CHECK(sig.step(2.0) == doctest::Approx(2.0).epsilon(1e-15));  // K is fixed
    const auto mss = ScalarModel::mss(7.5, 2.0, 0.1, 5.0);
    CHECK(mss.step(1.0) == doctest::Approx(7.5 / 2.1).epsilon(1e-15));
    CHECK_THROWS_AS(sig.step(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(sig.step(-0.1), std::domain_error);
}

TEST_CASE("critical growth rates") {
    CHECK(*ScalarModel::sigmoid_bh(2.5, 2.0).critical_r() == 2.0);  // exact at delta=2
    CHECK(*ScalarModel::scaled_bh(2.5, 1.0, 2.0).critical_r() == 2.0);
    CHECK(!ScalarModel::sigmoid_bh(2.5, 0.5).critical_r().has_value());
    CHECK(!ScalarModel::ricker_allee(1.0, 1.5, 9.0).critical_r().has_value());

    // MSS closed form, evaluated independently
    const double delta = 2.0, d = 5.0, b = 0.1;
    const double q = delta / (b * (d - delta));
    const double expected = std::pow(q, (1.0 - delta) / d) * (d / (d - delta) + std::pow(q, delta / d));
    const auto rc = ScalarModel::mss(7.5, delta, b, d).critical_r();
    REQUIRE(rc.has_value());
    CHECK(*rc == doctest::Approx(expected).epsilon(1e-15));
    CHECK(*rc == doctest::Approx(2.6018682664863118).epsilon(1e-12));
    // defining property: at r = r_crit the hump exactly touches the diagonal
    const auto crit_model = ScalarModel::mss(*rc, delta, b, d);
    const double uc = std::pow(delta / (b * (d - delta)), 1.0 / d);
    CHECK(crit_model.step(uc) == doctest::Approx(uc).epsilon(1e-12));
    // requires d > delta > 1
    CHECK(!ScalarModel::mss(7.5, 5.0, 0.1, 2.0).critical_r().has_value());
}

TEST_CASE("sigmoid equilibria at r=2.5, delta=2 match the closed forms") {
    const auto eq = find_equilibria(ScalarModel::sigmoid_bh(2.5, 2.0));
    REQUIRE(eq.roots.size() == 3);
    const double A = (2.5 - std::sqrt(2.5 * 2.5 - 4.0)) / 2.0;
    const double K = (2.5 + std::sqrt(2.5 * 2.5 - 4.0)) / 2.0;
    CHECK(eq.roots[0].value == 0.0);
    CHECK(eq.roots[0].stability == Stability::Stable);
    CHECK(eq.roots[0].role == RootRole::Origin);
    CHECK(std::abs(eq.roots[1].value - A) < 1e-10);
    CHECK(eq.roots[1].stability == Stability::Unstable);
    CHECK(eq.roots[1].role == RootRole::AlleeThreshold);
    CHECK(std::abs(eq.roots[2].value - K) < 1e-10);
    CHECK(eq.roots[2].stability == Stability::Stable);
    CHECK(eq.roots[2].role == RootRole::CarryingCapacity);
    CHECK(!eq.possibly_missed);
}

TEST_CASE("below the critical rate only the origin remains") {
    const auto eq = find_equilibria(ScalarModel::sigmoid_bh(1.9, 2.0));
    REQUIRE(eq.roots.size() == 1);
    CHECK(eq.roots[0].value == 0.0);
    CHECK(eq.roots[0].stability == Stability::Stable);
}

TEST_CASE("double root at the critical rate reports one marginal point") {
    const auto eq = find_equilibria(ScalarModel::sigmoid_bh(2.0, 2.0));
    REQUIRE(eq.roots.size() == 2);
    CHECK(eq.roots[1].value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eq.roots[1].stability == Stability::Marginal);
}

TEST_CASE("MSS equilibria vs dense sign-scan oracle") {
    const auto model = ScalarModel::mss(7.5, 2.0, 0.1, 5.0);
    const auto oracle = sign_scan_roots(model, 15.0, 1000000);
    REQUIRE(oracle.size() == 2);

    const auto eq = find_equilibria(model);
    REQUIRE(eq.roots.size() == 3);
    CHECK(eq.roots[0].stability == Stability::Stable);  // origin attracts
    CHECK(std::abs(eq.roots[1].value - oracle[0]) < 1e-8);
    CHECK(std::abs(eq.roots[2].value - oracle[1]) < 1e-8);
    for (const auto& rt : eq.roots) CHECK(std::abs(model.step(rt.value) - rt.value) <= 1e-10);

    // threshold and carrying capacity straddle the hump maximum
    const double uc = std::pow(7.5 * (5.0 - 2.0) / 2.0, 1.0 / 5.0);
    CHECK(eq.roots[1].value < uc);
    CHECK(uc < eq.roots[2].value);
}

TEST_CASE("residual contract holds across random models") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        ScalarModel m = ScalarModel::sigmoid_bh(1.0 + 4.0 * unit(rng), 0.5 + 3.0 * unit(rng));
        switch (trial % 4) {
            case 1: m = ScalarModel::scaled_bh(1.0 + 5.0 * unit(rng), 0.5 + 4.0 * unit(rng),
                                               1.1 + 2.0 * unit(rng)); break;
            case 2: m = ScalarModel::mss(1.0 + 9.0 * unit(rng), 1.1 + 1.5 * unit(rng),
                                         0.05 + unit(rng), 2.0 + 4.0 * unit(rng)); break;
            case 3: m = ScalarModel::ricker_allee(0.5 + 2.0 * unit(rng), 0.5 + 2.0 * unit(rng),
                                                  1.0 + 9.0 * unit(rng)); break;
            default: break;
        }
        const auto eq = find_equilibria(m);
        for (const auto& rt : eq.roots) CHECK(std::abs(m.step(rt.value) - rt.value) <= 1e-10);
    }
}

TEST_CASE("trichotomy of the sigmoid family under random growth rates") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 120; ++trial) {
        const double delta = 1.1 + 3.0 * unit(rng);
        const double rc = delta * std::pow(delta - 1.0, 1.0 / delta - 1.0);
        double f = 0.5 + 1.5 * unit(rng);
        if (std::abs(f - 1.0) < 1e-3) f += 2e-3;  // stay away from the degenerate rate
        const double r = rc * f;
        const auto eq = find_equilibria(ScalarModel::sigmoid_bh(r, delta));
        if (r < rc) {
            CHECK(eq.roots.size() == 1);
        } else {
            REQUIRE(eq.roots.size() == 3);
            const double uc = r * (delta - 1.0) / delta;
            CHECK(eq.roots[1].value > 0.0);
            CHECK(eq.roots[1].value < uc);
            CHECK(uc < eq.roots[2].value);
        }
    }
}

TEST_CASE("scaled-family ordering: thresholds move in, capacities move in") {
    std::mt19937_64 rng(555);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double delta = 1.05 + 4.95 * unit(rng);
        const double a = 1.001 + 8.999 * unit(rng);
        const double rca = std::pow(a, 1.0 / delta) * delta * std::pow(delta - 1.0, 1.0 / delta - 1.0);
        const double r = rca * (1.02 + 1.98 * unit(rng));

        const auto base = find_equilibria(ScalarModel::sigmoid_bh(r, delta));
        const auto scaled = find_equilibria(ScalarModel::scaled_bh(r, a, delta));
        const auto* A = base.find_role(RootRole::AlleeThreshold);
        const auto* K = base.find_role(RootRole::CarryingCapacity);
        const auto* Aa = scaled.find_role(RootRole::AlleeThreshold);
        const auto* Ka = scaled.find_role(RootRole::CarryingCapacity);
        REQUIRE(A != nullptr);
        REQUIRE(K != nullptr);
        REQUIRE(Aa != nullptr);
        REQUIRE(Ka != nullptr);
        CHECK(A->value < Aa->value);
        CHECK(Aa->value < Ka->value);
        CHECK(Ka->value < K->value);
    }
}

TEST_CASE("scaled thresholds match the quadratic closed form at delta=2") {
    const double r = 2.5, a = 1.46875;  // an inflated carrying constant
    const auto eq = find_equilibria(ScalarModel::scaled_bh(r, a, 2.0));
    const double Aa = (r - std::sqrt(r * r - 4.0 * a)) / 2.0;
    const double Ka = (r + std::sqrt(r * r - 4.0 * a)) / 2.0;
    CHECK(std::abs(eq.find_role(RootRole::AlleeThreshold)->value - Aa) < 1e-10);
    CHECK(std::abs(eq.find_role(RootRole::CarryingCapacity)->value - Ka) < 1e-10);
}

TEST_CASE("located MSS roots never exceed the Descartes bound") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> expo(2, 6);
    for (int trial = 0; trial < 150; ++trial) {
        const int delta = expo(rng);
        const int d = expo(rng);
        const double r = 0.5 + 14.5 * unit(rng);
        const double b = 0.01 + 2.0 * unit(rng);
        const auto eq = find_equilibria(ScalarModel::mss(r, delta, b, d));
        // F(x) = b x^d + x^delta - r x^(delta-1) + 1, descending exponents
        const int top = std::max(d, delta);
        std::vector<double> coeffs(top + 1, 0.0);
        coeffs[top - d] += b;
        coeffs[top - delta] += 1.0;
        coeffs[top - (delta - 1)] += -r;
        coeffs[top] += 1.0;
        CHECK(eq.positive_count() <= num::descartes_bound(coeffs));
    }
}

TEST_CASE("allee regime classification") {
    const auto strong = classify_allee(ScalarModel::sigmoid_bh(2.5, 2.0));
    CHECK(strong.regime == AlleeRegime::Strong);
    CHECK(*strong.r_crit == 2.0);

    CHECK(classify_allee(ScalarModel::sigmoid_bh(2.5, 0.5)).regime == AlleeRegime::Weak);
    CHECK(classify_allee(ScalarModel::sigmoid_bh(1.9, 2.0)).regime == AlleeRegime::None);
    // plain Beverton-Holt (delta=1) has no Allee effect: h decreases from r
    CHECK(classify_allee(ScalarModel::sigmoid_bh(2.5, 1.0)).regime == AlleeRegime::None);

    // predation-saturation Ricker: closed form and numeric scan agree
    CHECK(ricker_regime(1.0, 1.5, 9.0) == AlleeRegime::Strong);
    CHECK(classify_allee(ScalarModel::ricker_allee(1.0, 1.5, 9.0)).regime == AlleeRegime::Strong);
    CHECK(ricker_regime(1.2, 1.0, 2.0) == AlleeRegime::Weak);
    CHECK(classify_allee(ScalarModel::ricker_allee(1.2, 1.0, 2.0)).regime == AlleeRegime::Weak);
    CHECK(ricker_regime(1.0, 0.5, 0.1) == AlleeRegime::None);

    // MSS strong for delta > max(1, d)
    CHECK(classify_allee(ScalarModel::mss(3.0, 3.0, 0.5, 2.0)).regime == AlleeRegime::Strong);
}

TEST_CASE("simulate: extinction below the threshold is monotone") {
    const auto model = ScalarModel::sigmoid_bh(2.5, 2.0);
    const auto tr = simulate(model, 0.4, 50);  // u0 < A would be 0.5
    REQUIRE(tr.values.size() == 51);
    CHECK(!tr.diverged);
    for (size_t t = 1; t < tr.values.size(); ++t) CHECK(tr.values[t] <= tr.values[t - 1]);
    CHECK(tr.values.back() < 1e-12);
}

TEST_CASE("simulate: origin stays put") {
    const auto tr = simulate(ScalarModel::mss(7.5, 2.0, 0.1, 5.0), 0.0, 20);
    for (double v : tr.values) CHECK(v == 0.0);
}

TEST_CASE("asymptotic classification: fixed point, cycle, chaos") {
    const auto model = ScalarModel::sigmoid_bh(2.5, 2.0);
    const auto eq = find_equilibria(model);
    const auto tr = simulate(model, 1.7, 400);
    const auto cls = asymptotic_class(tr.values, eq, 1e-9, 16);
    CHECK(cls.kind == AsymptoticClass::Kind::FixedPoint);
    CHECK(eq.roots[cls.index].role == RootRole::CarryingCapacity);

    // periodic regime of the one-hump scramble map
    const auto mssp = ScalarModel::mss(7.5, 2.0, 0.1, 5.0);
    const auto eqp = find_equilibria(mssp);
    const auto trp = simulate(mssp, 1.0, 20000);
    const auto clsp = asymptotic_class(trp.values, eqp, 1e-6, 64);
    REQUIRE(clsp.kind == AsymptoticClass::Kind::Cycle);
    CHECK(clsp.period >= 2);
    CHECK(clsp.period == 16);
    CHECK(lyapunov(mssp, 1.0, 20000, 4000).exponent < 0.0);

    // chaotic regime
    const auto mssc = ScalarModel::mss(25.0, 2.0, 0.1, 5.0);
    const auto eqc = find_equilibria(mssc);
    const auto trc = simulate(mssc, 1.0, 20000);
    const auto clsc = asymptotic_class(trc.values, eqc, 1e-6, 64);
    CHECK(clsc.kind == AsymptoticClass::Kind::Aperiodic);
    CHECK(lyapunov(mssc, 1.0, 20000, 4000).exponent > 0.0);

    // budget precondition
    std::vector<double> tiny(10, 1.0);
    CHECK(asymptotic_class(tiny, eq, 1e-9, 16).kind == AsymptoticClass::Kind::Undetermined);
}

TEST_CASE("eventual monotone convergence when intra dominates (delta >= d)") {
    std::mt19937_64 rng(40);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const double d = 1.0 + 2.0 * unit(rng);
        const double delta = d + 2.5 * unit(rng);
        const double r = 1.0 + 4.0 * unit(rng);
        const double b = 0.1 + unit(rng);
        const auto model = ScalarModel::mss(r, delta, b, d);
        const auto eq = find_equilibria(model);
        const auto tr = simulate(model, 0.05 + 3.0 * unit(rng), 3000);
        REQUIRE(!tr.diverged);
        // tail must be monotone
        bool up = true, down = true;
        for (size_t t = tr.values.size() - 200; t + 1 < tr.values.size(); ++t) {
            if (tr.values[t + 1] < tr.values[t] - 1e-15) up = false;
            if (tr.values[t + 1] > tr.values[t] + 1e-15) down = false;
        }
        CHECK((up || down));
        const auto cls = asymptotic_class(tr.values, eq, 1e-7, 4);
        CHECK(cls.kind == AsymptoticClass::Kind::FixedPoint);
    }
}

TEST_CASE("analytic derivatives match central differences") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const ScalarModel models[] = {
        ScalarModel::sigmoid_bh(2.5, 2.0),        ScalarModel::sigmoid_bh(1.7, 0.6),
        ScalarModel::scaled_bh(3.0, 2.3, 1.8),    ScalarModel::elaydi_sacker(2.0, 0.5, 1.2, 0.8),
        ScalarModel::ricker_allee(1.0, 1.5, 9.0), ScalarModel::mss(7.5, 2.0, 0.1, 5.0),
    };
    for (const auto& m : models) {
        for (int k = 0; k < 400; ++k) {
            const double u = 0.01 + unit(rng) * 0.9 * m.default_u_max();
            const double h = 1e-6 * std::max(1.0, u);
            const double fd = (m.step(u + h) - m.step(u - h)) / (2.0 * h);
            const double an = m.deriv(u);
            CHECK(std::abs(an - fd) <= 1e-6 * std::max(1.0, std::abs(an)));
            // per-capita derivative as well
            const double fdh = (m.percap(u + h) - m.percap(u - h)) / (2.0 * h);
            const double anh = m.percap_deriv(u);
            CHECK(std::abs(anh - fdh) <= 2e-6 * std::max(1.0, std::abs(anh)));
        }
    }
}

TEST_CASE("record serialization carries the family tag and parameters") {
    const auto rec = ScalarModel::mss(7.5, 2.0, 0.1, 5.0).to_record();
    CHECK(rec.at("family") == "mss");
    CHECK(rec.at("r") == "7.5");
    CHECK(rec.at("delta") == "2");
    CHECK(std::stod(rec.at("b")) == 0.1);  // 17 significant digits round-trip
    CHECK(rec.at("d") == "5");
}
