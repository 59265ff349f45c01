#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "gamowkit/hardy.hpp"
#include "gamowkit/rational.hpp"
#include "gamowkit/wavefunction.hpp"
#include "oracles.hpp"

using namespace gamowkit;

namespace {

WaveFunction sampled(const EnergyGrid& g, const std::function<Complex(double)>& fn) {
    std::vector<Complex> s(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) s[i] = fn(g.point(i));
    return WaveFunction(g, std::move(s));
}

struct RandomRational {
    std::vector<Complex> poles;
    std::vector<Complex> residues;
};

RandomRational random_rational(std::mt19937_64& rng, HalfPlane side, int max_poles = 4,
                               double im_lo = 0.5, double im_hi = 1.5) {
    std::uniform_int_distribution<int> np(1, max_poles);
    std::uniform_real_distribution<double> re(-2.0, 2.0), im(im_lo, im_hi), amp(-1.5, 1.5);
    RandomRational out;
    const double sgn = side == HalfPlane::upper ? -1.0 : 1.0;
    const int n = np(rng);
    for (int i = 0; i < n; ++i) {
        out.poles.push_back(Complex(re(rng), sgn * im(rng)));
        out.residues.push_back(Complex(amp(rng), amp(rng)));
    }
    return out;
}

}  // namespace

TEST_CASE("hilbert transform preconditions") {
    const EnergyGrid small = EnergyGrid::uniform(0.0, 1.0, 8);
    REQUIRE_THROWS_AS(hilbert_transform(WaveFunction::zero(small)), ResolutionError);

    std::vector<double> pts{0, 0.1, 0.3, 0.6, 1.0, 1.5, 2.1, 2.8, 3.6, 4.5, 5.5, 6.6, 7.8, 9.1, 10.5, 12.0};
    std::vector<double> w(16, 12.0 / 16.0);
    double acc = 0;
    for (double x : w) acc += x;
    // rescale weights so they sum to the span exactly
    for (auto& x : w) x *= 12.0 / acc;
    const EnergyGrid nonuni(0.0, 12.0, 16, pts, w);
    REQUIRE_THROWS_AS(hilbert_transform(WaveFunction::zero(nonuni)), GridError);
}

TEST_CASE("hilbert transform of zero is zero") {
    const EnergyGrid g = EnergyGrid::uniform(-10.0, 10.0, 64);
    const WaveFunction h = hilbert_transform(WaveFunction::zero(g));
    REQUIRE(h.max_abs() == 0.0);
}

TEST_CASE("hilbert transform of a lower-pole resonance term is -i times itself") {
    const EnergyGrid g = EnergyGrid::uniform(-40.0, 40.0, 4096);
    const Complex z(1.0, -0.5);
    const WaveFunction f = sampled(g, [&](double E) { return 1.0 / (Complex(E, 0) - z); });
    const WaveFunction h = hilbert_transform(f);
    const double scale = f.max_abs();
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (std::abs(g.point(i)) > 20.0) continue;
        worst = std::max(worst, std::abs(h.samples()[i] - Complex(0, -1) * f.samples()[i]) / scale);
    }
    REQUIRE(worst < 1e-4);
}

TEST_CASE("hilbert pair cos <-> sin against the principal-value oracle") {
    const EnergyGrid g = EnergyGrid::uniform(-40.0, 40.0, 4096);
    const double sigma = 8.0;
    auto fn = [&](double E) { return Complex(std::cos(E) * std::exp(-E * E / (2 * sigma * sigma)), 0.0); };
    const WaveFunction f = sampled(g, fn);
    const WaveFunction h = hilbert_transform(f);
    double worst_analytic = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double E = g.point(i);
        if (std::abs(E) > 20.0) continue;
        const double target = std::sin(E) * std::exp(-E * E / (2 * sigma * sigma));
        worst_analytic = std::max(worst_analytic, std::abs(h.samples()[i] - Complex(target, 0)));
    }
    REQUIRE(worst_analytic < 1e-3);

    // spot-check 20 interior points against direct desingularized quadrature
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> pick(g.size() / 4, 3 * g.size() / 4);
    for (int k = 0; k < 20; ++k) {
        const std::size_t i = pick(rng);
        const Complex oracle = oracles::pv_hilbert_oracle(fn, g.point(i), -40.0, 40.0, 40001);
        REQUIRE(std::abs(h.samples()[i] - oracle) < 1e-3);
    }
}

TEST_CASE("hilbert transform is an isometry up to taper loss on interior packets") {
    const EnergyGrid g = EnergyGrid::uniform(-40.0, 40.0, 4096);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> mu(-10.0, 10.0), sig(2.0, 4.0), kap(5.0, 20.0), amp(-1.0, 1.0);
    for (int rep = 0; rep < 5; ++rep) {
        double m0 = mu(rng), s0 = sig(rng), k0 = kap(rng);
        Complex a(amp(rng), amp(rng));
        const WaveFunction f = sampled(g, [&](double E) {
            return a * std::exp(-(E - m0) * (E - m0) / (2 * s0 * s0)) * std::exp(Complex(0, k0 * E));
        });
        const WaveFunction h = hilbert_transform(f);
        const double ratio = h.norm() / f.norm();
        REQUIRE(ratio >= 0.99);
        REQUIRE(ratio <= 1.0 + 1e-9);
    }
}

TEST_CASE("hilbert transform squares to minus the identity on interior points") {
    const EnergyGrid g = EnergyGrid::uniform(-40.0, 40.0, 4096);
    const WaveFunction f = sampled(g, [&](double E) {
        return Complex(std::cos(1.3 * E), 0.4) * std::exp(-E * E / 72.0);
    });
    const WaveFunction hh = hilbert_transform(hilbert_transform(f));
    const double scale = f.max_abs();
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (std::abs(g.point(i)) > 20.0) continue;
        worst = std::max(worst, std::abs(hh.samples()[i] + f.samples()[i]) / scale);
    }
    REQUIRE(worst < 1e-3);
}

TEST_CASE("membership of a resonance term depends on the half plane") {
    const EnergyGrid g = EnergyGrid::uniform(-150.0, 150.0, 4096);
    const WaveFunction f = sampled(g, [](double E) { return 1.0 / (Complex(E, 0) - Complex(1.0, -0.5)); });

    const HardyReport up = hardy_membership(f, HalfPlane::upper);
    REQUIRE(up.is_hardy);
    REQUIRE(up.wrong_side_leakage <= 1e-6);

    const HardyReport lo = hardy_membership(f, HalfPlane::lower);
    REQUIRE_FALSE(lo.is_hardy);
    REQUIRE(lo.wrong_side_leakage > 0.5);
}

TEST_CASE("zero function belongs to both Hardy classes") {
    const EnergyGrid g = EnergyGrid::uniform(-10.0, 10.0, 128);
    for (HalfPlane hp : {HalfPlane::upper, HalfPlane::lower}) {
        const HardyReport r = hardy_membership(WaveFunction::zero(g), hp);
        REQUIRE(r.is_hardy);
        REQUIRE(r.titchmarsh_residual == 0.0);
        REQUIRE(r.wrong_side_leakage == 0.0);
    }
}

TEST_CASE("membership rejects nonpositive tolerances") {
    const EnergyGrid g = EnergyGrid::uniform(-10.0, 10.0, 128);
    REQUIRE_THROWS_AS(hardy_membership(WaveFunction::zero(g), HalfPlane::upper, 0.0), ConfigError);
}

TEST_CASE("slow decay at the window edge raises the report warning") {
    const EnergyGrid g = EnergyGrid::uniform(-150.0, 150.0, 4096);
    // 1/E tails: |f(edge)|/max|f| ~ 5e-3, far above the 1e-8 threshold
    const WaveFunction slow = sampled(g, [](double E) { return 1.0 / (Complex(E, 0) - Complex(0, -1)); });
    REQUIRE(hardy_membership(slow, HalfPlane::upper).decay_warning);

    const WaveFunction fast = sampled(g, [](double E) { return Complex(std::exp(-E * E / 200.0), 0.0); });
    REQUIRE_FALSE(hardy_membership(fast, HalfPlane::upper).decay_warning);
}

TEST_CASE("randomized rationals classify correctly on both sides") {
    const EnergyGrid g = EnergyGrid::uniform(-150.0, 150.0, 4096);
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        const HalfPlane side = trial % 2 == 0 ? HalfPlane::upper : HalfPlane::lower;
        const HalfPlane other = side == HalfPlane::upper ? HalfPlane::lower : HalfPlane::upper;
        const RandomRational rr = random_rational(rng, side);
        const WaveFunction f =
            sampled(g, [&](double E) { return oracles::rational_eval(rr.poles, rr.residues, Complex(E, 0)); });
        REQUIRE(hardy_membership(f, side).is_hardy);
        REQUIRE_FALSE(hardy_membership(f, other).is_hardy);
    }
}

TEST_CASE("hardy class is preserved under complex linear combination") {
    const EnergyGrid g = EnergyGrid::uniform(-150.0, 150.0, 4096);
    std::mt19937_64 rng(31);
    const RandomRational a = random_rational(rng, HalfPlane::upper);
    const RandomRational b = random_rational(rng, HalfPlane::upper);
    const Complex alpha(0.7, -1.2), beta(-0.3, 0.4);
    const WaveFunction f = sampled(g, [&](double E) {
        return alpha * oracles::rational_eval(a.poles, a.residues, Complex(E, 0)) +
               beta * oracles::rational_eval(b.poles, b.residues, Complex(E, 0));
    });
    REQUIRE(hardy_membership(f, HalfPlane::upper).is_hardy);
}

TEST_CASE("analytic continuation matches closed forms") {
    const EnergyGrid g = EnergyGrid::uniform(-150.0, 150.0, 4096);

    SECTION("single pole, spec point") {
        const Complex zp(2.0, -1.0);
        const WaveFunction f = sampled(g, [&](double E) { return 1.0 / (Complex(E, 0) - zp); });
        const Complex got = analytic_continue(f, HalfPlane::upper, Complex(1.0, 2.0));
        const Complex exact = 1.0 / (Complex(1.0, 2.0) - zp);
        REQUIRE(std::abs(got - exact) < 1e-5 * std::abs(exact));
    }

    SECTION("two poles") {
        // widths of 0.5 need a finer grid to keep sampling aliasing out
        const EnergyGrid g2 = EnergyGrid::uniform(-150.0, 150.0, 8192);
        const Complex p1(3.0, -0.25), p2(5.0, -0.25);
        const WaveFunction f =
            sampled(g2, [&](double E) { return 1.0 / ((Complex(E, 0) - p1) * (Complex(E, 0) - p2)); });
        const Complex z(4.0, 1.0);
        const Complex exact = 1.0 / ((z - p1) * (z - p2));
        const Complex got = analytic_continue(f, HalfPlane::upper, z);
        REQUIRE(std::abs(got - exact) < 1e-5 * std::abs(exact));
    }

    SECTION("zero function") {
        REQUIRE(analytic_continue(WaveFunction::zero(g), HalfPlane::upper, Complex(0.0, 1.0)) ==
                Complex(0.0, 0.0));
    }
}

TEST_CASE("analytic continuation rejects bad inputs") {
    const EnergyGrid g = EnergyGrid::uniform(-150.0, 150.0, 4096);
    const Complex zp(2.0, -1.0);
    const WaveFunction f = sampled(g, [&](double E) { return 1.0 / (Complex(E, 0) - zp); });
    // wrong side of the axis
    REQUIRE_THROWS_AS(analytic_continue(f, HalfPlane::upper, Complex(1.0, -2.0)), DomainError);
    // too close to the axis
    REQUIRE_THROWS_AS(analytic_continue(f, HalfPlane::upper, Complex(1.0, 0.5 * g.spacing())),
                      DomainError);
    // not Hardy for the requested side
    REQUIRE_THROWS_AS(analytic_continue(f, HalfPlane::lower, Complex(1.0, -2.0)), NotHardyError);
}

TEST_CASE("continuation agrees with closed form at randomized interior points") {
    const EnergyGrid g = EnergyGrid::uniform(-150.0, 150.0, 4096);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> re(-3.0, 3.0), im(0.5, 3.0);
    for (int k = 0; k < 5; ++k) {
        const RandomRational rr = random_rational(rng, HalfPlane::upper, 3);
        const WaveFunction f =
            sampled(g, [&](double E) { return oracles::rational_eval(rr.poles, rr.residues, Complex(E, 0)); });
        for (int j = 0; j < 4; ++j) {
            const Complex z(re(rng), im(rng));
            const Complex exact = oracles::rational_eval(rr.poles, rr.residues, z);
            const Complex got = analytic_continue(f, HalfPlane::upper, z);
            REQUIRE(std::abs(got - exact) <= 1e-5 * std::max(std::abs(exact), 1e-12));
        }
    }
}
