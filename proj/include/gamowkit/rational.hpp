#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "gamowkit/errors.hpp"

namespace gamowkit {

using Complex = std::complex<double>;

// Rational function of complex energy, stored as numerator/denominator
// coefficient lists in ascending powers.  Pole models and closed-form wave
// functions are built from these; the rational model on the physical axis
// *is* the boundary value of its own analytic continuation, which is how
// second-sheet objects are realized here.
class RationalFunction {
public:
    RationalFunction(std::vector<Complex> num, std::vector<Complex> den)
        : num_(std::move(num)), den_(std::move(den)) {
        trim(num_);
        trim(den_);
        if (den_.empty()) throw ConfigError("RationalFunction: zero denominator");
        if (num_.empty()) num_.push_back(Complex(0.0, 0.0));
    }

    static RationalFunction constant(Complex c) { return RationalFunction({c}, {Complex(1.0, 0.0)}); }

    // sum_k residues[k] / (E - poles[k]) assembled over a common denominator.
    static RationalFunction sum_of_poles(const std::vector<Complex>& poles,
                                         const std::vector<Complex>& residues) {
        if (poles.size() != residues.size())
            throw ShapeError("sum_of_poles: poles/residues length mismatch");
        std::vector<Complex> den{Complex(1.0, 0.0)};
        for (Complex p : poles) den = mul(den, {-p, Complex(1.0, 0.0)});
        std::vector<Complex> num{Complex(0.0, 0.0)};
        for (std::size_t k = 0; k < poles.size(); ++k) {
            std::vector<Complex> term{residues[k]};
            for (std::size_t j = 0; j < poles.size(); ++j)
                if (j != k) term = mul(term, {-poles[j], Complex(1.0, 0.0)});
            num = add(num, term);
        }
        return RationalFunction(std::move(num), std::move(den));
    }

    Complex eval(Complex z) const { return horner(num_, z) / horner(den_, z); }
    Complex operator()(Complex z) const { return eval(z); }

    const std::vector<Complex>& num() const { return num_; }
    const std::vector<Complex>& den() const { return den_; }
    int num_degree() const { return static_cast<int>(num_.size()) - 1; }
    int den_degree() const { return static_cast<int>(den_.size()) - 1; }

    // Denominator roots via the companion matrix.
    std::vector<Complex> poles() const {
        const int d = den_degree();
        if (d < 1) return {};
        Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
        const Complex lead = den_.back();
        for (int i = 1; i < d; ++i) comp(i, i - 1) = Complex(1.0, 0.0);
        for (int i = 0; i < d; ++i) comp(i, d - 1) = -den_[static_cast<std::size_t>(i)] / lead;
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
        std::vector<Complex> out(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
        return out;
    }

private:
    static void trim(std::vector<Complex>& c) {
        while (c.size() > 1 && std::abs(c.back()) == 0.0) c.pop_back();
        if (c.size() == 1 && std::abs(c[0]) == 0.0 && false) c.clear();
    }
    static Complex horner(const std::vector<Complex>& c, Complex z) {
        Complex acc(0.0, 0.0);
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
        return acc;
    }
    static std::vector<Complex> mul(const std::vector<Complex>& a, const std::vector<Complex>& b) {
        std::vector<Complex> out(a.size() + b.size() - 1, Complex(0.0, 0.0));
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
        return out;
    }
    static std::vector<Complex> add(const std::vector<Complex>& a, const std::vector<Complex>& b) {
        std::vector<Complex> out(std::max(a.size(), b.size()), Complex(0.0, 0.0));
        for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
        for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
        return out;
    }

    std::vector<Complex> num_;
    std::vector<Complex> den_;
};

}  // namespace gamowkit
