#include <catch2/catch_amalgamated.hpp>

#include <limits>
#include <random>

#include "gamowkit/grid.hpp"
#include "gamowkit/rational.hpp"
#include "gamowkit/wavefunction.hpp"

using namespace gamowkit;

TEST_CASE("uniform grid satisfies the trapezoid weight convention") {
    const EnergyGrid g = EnergyGrid::uniform(-3.0, 7.0, 101);
    double sum = 0.0;
    for (double w : g.weights()) sum += w;
    REQUIRE(sum == Catch::Approx(10.0).epsilon(1e-12));
    REQUIRE(g.is_uniform());
    REQUIRE(g.point(0) == -3.0);
    REQUIRE(g.point(100) == 7.0);
}

TEST_CASE("grid invariants are enforced") {
    REQUIRE_THROWS_AS(EnergyGrid::uniform(2.0, 2.0, 16), GridError);
    REQUIRE_THROWS_AS(EnergyGrid::uniform(0.0, 1.0, 1), GridError);
    std::vector<double> pts{0.0, 0.5, 1.0};
    std::vector<double> bad_w{0.25, -0.5, 0.25};
    REQUIRE_THROWS_AS(EnergyGrid(0.0, 1.0, 3, pts, bad_w), GridError);
}

TEST_CASE("basis synthesize / project roundtrip is exact") {
    const EnergyGrid g = EnergyGrid::uniform(0.0, 4.0, 5);
    const std::vector<Complex> v{{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {0, 0}};
    const WaveFunction f = basis_synthesize(v, g);
    REQUIRE(basis_project(f) == v);
    REQUIRE(basis_synthesize(std::vector<Complex>(5, Complex(0, 0)), g).norm() == 0.0);
}

TEST_CASE("synthesized norm matches direct quadrature") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd;
    const EnergyGrid g = EnergyGrid::uniform(-1.0, 2.0, 64);
    std::vector<Complex> v(64);
    for (auto& c : v) c = Complex(nd(rng), nd(rng));
    const WaveFunction f = basis_synthesize(v, g);
    double direct = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) direct += g.weight(i) * std::norm(v[i]);
    REQUIRE(f.norm_sq() == Catch::Approx(direct).epsilon(1e-14));
}

TEST_CASE("basis_synthesize rejects length mismatch") {
    const EnergyGrid g = EnergyGrid::uniform(0.0, 1.0, 8);
    REQUIRE_THROWS_AS(basis_synthesize(std::vector<Complex>(7), g), ShapeError);
}

TEST_CASE("non-finite samples are rejected") {
    const EnergyGrid g = EnergyGrid::uniform(0.0, 1.0, 8);
    std::vector<Complex> v(8, Complex(1.0, 0.0));
    v[3] = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
    REQUIRE_THROWS_AS(WaveFunction(g, v), ConfigError);
}

TEST_CASE("closed-form wave functions validate their samples") {
    const EnergyGrid g = EnergyGrid::uniform(-5.0, 5.0, 32);
    const RationalFunction rf({Complex(1, 0)}, {Complex(-1, 0.5), Complex(1, 0)});
    const WaveFunction f = WaveFunction::from_closed_form(g, rf);
    REQUIRE(f.closed_form().has_value());

    std::vector<Complex> tampered = f.samples();
    tampered[3] += Complex(1e-6, 0.0);
    REQUIRE_THROWS_AS(WaveFunction(g, tampered, rf), ConfigError);
}

TEST_CASE("rational sum of poles evaluates like the partial fractions") {
    const std::vector<Complex> poles{{1.0, -0.5}, {-2.0, -1.0}};
    const std::vector<Complex> residues{{2.0, 1.0}, {0.0, -3.0}};
    const RationalFunction rf = RationalFunction::sum_of_poles(poles, residues);
    const Complex z(0.3, 0.9);
    Complex direct(0, 0);
    for (std::size_t i = 0; i < poles.size(); ++i) direct += residues[i] / (z - poles[i]);
    REQUIRE(std::abs(rf.eval(z) - direct) < 1e-13 * std::abs(direct));

    auto roots = rf.poles();
    REQUIRE(roots.size() == 2);
    for (const auto& r : roots) {
        const bool near0 = std::abs(r - poles[0]) < 1e-10;
        const bool near1 = std::abs(r - poles[1]) < 1e-10;
        REQUIRE((near0 || near1));
    }
}
