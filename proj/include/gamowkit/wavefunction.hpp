#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "gamowkit/errors.hpp"
#include "gamowkit/grid.hpp"
#include "gamowkit/rational.hpp"

namespace gamowkit {

// Complex energy wave function sampled on a grid, optionally backed by a
// closed-form rational model.  In the discretized representation the vector
// *is* its wave function; quadrature weights live in the grid and enter all
// inner products.
class WaveFunction {
public:
    WaveFunction(EnergyGrid grid, std::vector<Complex> samples,
                 std::optional<RationalFunction> closed_form = std::nullopt)
        : grid_(std::move(grid)), samples_(std::move(samples)), closed_form_(std::move(closed_form)) {
        if (samples_.size() != grid_.size())
            throw ShapeError("WaveFunction: sample count does not match grid");
        for (const Complex& c : samples_)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw ConfigError("WaveFunction: samples must be finite");
        if (closed_form_) {
            double mx = max_abs();
            for (std::size_t i = 0; i < samples_.size(); ++i) {
                const Complex ref = closed_form_->eval(Complex(grid_.point(i), 0.0));
                if (std::abs(samples_[i] - ref) > 1e-12 * std::max(mx, 1e-300))
                    throw ConfigError("WaveFunction: samples disagree with closed form");
            }
        }
    }

    static WaveFunction from_closed_form(EnergyGrid grid, RationalFunction rf) {
        std::vector<Complex> s(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) s[i] = rf.eval(Complex(grid.point(i), 0.0));
        return WaveFunction(std::move(grid), std::move(s), std::move(rf));
    }

    static WaveFunction zero(EnergyGrid grid) {
        std::vector<Complex> s(grid.size(), Complex(0.0, 0.0));
        return WaveFunction(std::move(grid), std::move(s));
    }

    const EnergyGrid& grid() const { return grid_; }
    const std::vector<Complex>& samples() const { return samples_; }
    const std::optional<RationalFunction>& closed_form() const { return closed_form_; }
    std::size_t size() const { return samples_.size(); }

    double max_abs() const {
        double m = 0.0;
        for (const Complex& c : samples_) m = std::max(m, std::abs(c));
        return m;
    }

    // Weighted L2 norm on the grid.
    double norm_sq() const {
        double s = 0.0;
        for (std::size_t i = 0; i < samples_.size(); ++i) s += grid_.weight(i) * std::norm(samples_[i]);
        return s;
    }
    double norm() const { return std::sqrt(norm_sq()); }

    // <this|other> = integral conj(this) * other dE by quadrature.
    Complex inner(const WaveFunction& other) const {
        if (grid_ != other.grid_) throw ShapeError("inner: grids differ");
        Complex s(0.0, 0.0);
        for (std::size_t i = 0; i < samples_.size(); ++i)
            s += grid_.weight(i) * std::conj(samples_[i]) * other.samples_[i];
        return s;
    }

    WaveFunction scaled(Complex a) const {
        std::vector<Complex> s(samples_);
        for (auto& v : s) v *= a;
        return WaveFunction(grid_, std::move(s));
    }

    WaveFunction normalized() const {
        const double n = norm();
        if (n == 0.0) throw ConfigError("normalized: zero wave function");
        return scaled(Complex(1.0 / n, 0.0));
    }

    // Ratio |f(edge)| / max|f| used for the spectral-decay warning.
    double edge_decay_ratio() const {
        const double m = max_abs();
        if (m == 0.0) return 0.0;
        return std::max(std::abs(samples_.front()), std::abs(samples_.back())) / m;
    }

private:
    EnergyGrid grid_;
    std::vector<Complex> samples_;
    std::optional<RationalFunction> closed_form_;
};

// Basis expansion on the grid is the identity on sample values; these two fix
// the quadrature-weight convention of the pair (vector <-> wave function).
inline WaveFunction basis_synthesize(const std::vector<Complex>& samples, const EnergyGrid& grid) {
    if (samples.size() != grid.size()) throw ShapeError("basis_synthesize: length mismatch");
    return WaveFunction(grid, samples);
}

inline std::vector<Complex> basis_project(const WaveFunction& f) { return f.samples(); }

}  // namespace gamowkit
