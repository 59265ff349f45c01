#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "gamowkit/errors.hpp"
#include "gamowkit/rational.hpp"

namespace gamowkit {

// One resonance pole of the scattering matrix on the second sheet:
// position z_R = e_r - i*gamma/2 strictly below the real axis, order r >= 1.
struct PoleSpec {
    double e_r = 0.0;
    double gamma = 0.0;
    int order = 1;

    PoleSpec() = default;
    PoleSpec(double e_r_, double gamma_, int order_ = 1) : e_r(e_r_), gamma(gamma_), order(order_) {
        if (!(gamma > 0.0)) throw ConfigError("PoleSpec: gamma must be positive");
        if (order < 1) throw ConfigError("PoleSpec: order must be >= 1");
    }

    Complex z() const { return Complex(e_r, -0.5 * gamma); }

    bool operator==(const PoleSpec& o) const {
        return e_r == o.e_r && gamma == o.gamma && order == o.order;
    }
};

// Unitary S-matrix model: a product of Blaschke-type factors
//   ((z - conj(z_R)) / (z - z_R))^r
// per declared pole, times an optional rational background.  Each factor has
// exactly unit modulus on the real axis, so |S(E)| = 1 holds by
// construction; the background is validated against the same requirement.
class SMatrixModel {
public:
    explicit SMatrixModel(std::vector<PoleSpec> poles,
                          std::optional<RationalFunction> background = std::nullopt)
        : poles_(std::move(poles)), background_(std::move(background)) {
        if (background_) {
            // sample the axis across the pole region; reject non-unitary backgrounds
            double lo = -10.0, hi = 10.0;
            for (const auto& p : poles_) {
                lo = std::min(lo, p.e_r - 10.0 * p.gamma);
                hi = std::max(hi, p.e_r + 10.0 * p.gamma);
            }
            for (int i = 0; i <= 64; ++i) {
                const double E = lo + (hi - lo) * i / 64.0;
                const double mod = std::abs(background_->eval(Complex(E, 0.0)));
                if (std::abs(mod - 1.0) > 1e-10)
                    throw ConfigError("SMatrixModel: background is not unit-modulus on the real axis");
            }
        }
    }

    // Background with zeros at conj(w_k) and poles at w_k (all w_k below the
    // axis), which is unit-modulus on the axis identically.
    static RationalFunction reflection_background(const std::vector<Complex>& lower_poles) {
        std::vector<Complex> num{Complex(1.0, 0.0)}, den{Complex(1.0, 0.0)};
        auto mul = [](std::vector<Complex> a, Complex root) {
            std::vector<Complex> out(a.size() + 1, Complex(0.0, 0.0));
            for (std::size_t i = 0; i < a.size(); ++i) {
                out[i] += a[i] * (-root);
                out[i + 1] += a[i];
            }
            return out;
        };
        for (Complex w : lower_poles) {
            if (!(w.imag() < 0.0))
                throw ConfigError("reflection_background: poles must lie below the axis");
            num = mul(num, std::conj(w));
            den = mul(den, w);
        }
        return RationalFunction(std::move(num), std::move(den));
    }

    const std::vector<PoleSpec>& poles() const { return poles_; }
    const std::optional<RationalFunction>& background() const { return background_; }

    Complex evaluate(Complex z) const {
        double scale = 1.0;
        for (const auto& p : poles_) scale = std::max(scale, std::abs(p.z()));
        Complex s(1.0, 0.0);
        for (const auto& p : poles_) {
            const Complex zr = p.z();
            if (std::abs(z - zr) < 1e-12 * scale)
                throw PoleEvaluationError("evaluate: z coincides with a model pole");
            const Complex factor = (z - std::conj(zr)) / (z - zr);
            Complex pw(1.0, 0.0);
            for (int k = 0; k < p.order; ++k) pw *= factor;
            s *= pw;
        }
        if (background_) {
            for (Complex w : background_->poles())
                if (std::abs(z - w) < 1e-12 * scale)
                    throw PoleEvaluationError("evaluate: z coincides with a background pole");
            s *= background_->eval(z);
        }
        return s;
    }

    // Laurent coefficients a_{-1} ... a_{-order} of S at the pole position,
    // by trapezoid contour integration on a circle of radius gamma/4.
    std::vector<Complex> pole_residues(const PoleSpec& pole, double radius_frac = 0.25,
                                       int nodes = 512) const {
        bool found = false;
        for (const auto& p : poles_) found = found || (p == pole);
        if (!found) throw ConfigError("pole_residues: pole is not part of the model");
        const Complex zr = pole.z();
        const double R = pole.gamma * radius_frac;
        for (const auto& p : poles_) {
            if (p == pole) continue;
            if (std::abs(p.z() - zr) < 4.0 * R)
                throw ContourOverlapError("pole_residues: another pole too close to the contour");
        }
        if (background_) {
            for (Complex w : background_->poles())
                if (std::abs(w - zr) < 4.0 * R)
                    throw ContourOverlapError("pole_residues: background pole too close to the contour");
        }
        const double pi = 3.14159265358979323846;
        std::vector<Complex> svals(static_cast<std::size_t>(nodes));
        for (int j = 0; j < nodes; ++j) {
            const double th = 2.0 * pi * j / nodes;
            svals[static_cast<std::size_t>(j)] = evaluate(zr + R * Complex(std::cos(th), std::sin(th)));
        }
        std::vector<Complex> out(static_cast<std::size_t>(pole.order));
        for (int m = 1; m <= pole.order; ++m) {
            // a_{-m} = (1/2 pi i) oint S(z) (z - z_R)^{m-1} dz
            Complex acc(0.0, 0.0);
            for (int j = 0; j < nodes; ++j) {
                const double th = 2.0 * pi * j / nodes;
                const Complex u = R * Complex(std::cos(th), std::sin(th));
                Complex up(1.0, 0.0);
                for (int q = 0; q < m - 1; ++q) up *= u;
                acc += svals[static_cast<std::size_t>(j)] * up * Complex(0.0, 1.0) * u;
            }
            out[static_cast<std::size_t>(m - 1)] = acc / static_cast<double>(nodes) / Complex(0.0, 1.0);
        }
        return out;
    }

private:
    std::vector<PoleSpec> poles_;
    std::optional<RationalFunction> background_;
};

}  // namespace gamowkit
