#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "gamowkit/errors.hpp"

namespace gamowkit {

// Discretization of the continuous energy spectrum [e0, e_max] with
// per-point quadrature weights.  Weights follow the trapezoid convention,
// so sum(weights) == e_max - e0.
class EnergyGrid {
public:
    EnergyGrid(double e0, double e_max, std::size_t n,
               std::vector<double> points, std::vector<double> weights)
        : e0_(e0), e_max_(e_max), points_(std::move(points)), weights_(std::move(weights)) {
        if (!(e0_ < e_max_)) throw GridError("EnergyGrid: require e0 < e_max");
        if (n < 2) throw GridError("EnergyGrid: require n >= 2");
        if (points_.size() != n || weights_.size() != n)
            throw GridError("EnergyGrid: points/weights length mismatch");
        double wsum = 0.0;
        for (double w : weights_) {
            if (!(w > 0.0)) throw GridError("EnergyGrid: weights must be positive");
            wsum += w;
        }
        const double span = e_max_ - e0_;
        if (std::abs(wsum - span) > 1e-9 * span)
            throw GridError("EnergyGrid: weights do not sum to the span");
    }

    static EnergyGrid uniform(double e0, double e_max, std::size_t n) {
        if (!(e0 < e_max)) throw GridError("EnergyGrid: require e0 < e_max");
        if (n < 2) throw GridError("EnergyGrid: require n >= 2");
        const double h = (e_max - e0) / static_cast<double>(n - 1);
        std::vector<double> pts(n), w(n, h);
        for (std::size_t i = 0; i < n; ++i) pts[i] = e0 + h * static_cast<double>(i);
        pts.back() = e_max;
        w.front() = 0.5 * h;
        w.back() = 0.5 * h;
        return EnergyGrid(e0, e_max, n, std::move(pts), std::move(w));
    }

    double e0() const { return e0_; }
    double e_max() const { return e_max_; }
    std::size_t size() const { return points_.size(); }
    const std::vector<double>& points() const { return points_; }
    const std::vector<double>& weights() const { return weights_; }
    double point(std::size_t i) const { return points_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }

    double spacing() const { return (e_max_ - e0_) / static_cast<double>(size() - 1); }

    bool is_uniform(double rel_tol = 1e-9) const {
        const double h = spacing();
        for (std::size_t i = 1; i < points_.size(); ++i)
            if (std::abs(points_[i] - points_[i - 1] - h) > rel_tol * std::abs(h)) return false;
        return true;
    }

    bool operator==(const EnergyGrid& other) const {
        return e0_ == other.e0_ && e_max_ == other.e_max_ && points_ == other.points_;
    }
    bool operator!=(const EnergyGrid& other) const { return !(*this == other); }

private:
    double e0_;
    double e_max_;
    std::vector<double> points_;
    std::vector<double> weights_;
};

}  // namespace gamowkit
