#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "gamowkit/errors.hpp"
#include "gamowkit/evolution.hpp"
#include "gamowkit/hardy.hpp"
#include "gamowkit/jordan.hpp"
#include "gamowkit/parallel.hpp"
#include "gamowkit/wavefunction.hpp"

namespace gamowkit {

// |<psi|phi>|^2 by quadrature on the shared grid.
inline double born_overlap(const WaveFunction& psi, const WaveFunction& phi) {
    return std::norm(psi.inner(phi));
}

// Tr(Lambda W) with quadrature weights on the continuum block.  Returns the
// real part; the imaginary residual is written to *imag_residual when given.
inline double trace_probability(const StateOperator& lambda, const StateOperator& W,
                                double* imag_residual = nullptr) {
    if (lambda.basis() != W.basis()) throw ShapeError("trace_probability: bases differ");
    const CompositeBasis& basis = lambda.basis();
    Eigen::VectorXd g = Eigen::VectorXd::Ones(basis.dim());
    if (basis.grid()) {
        const EnergyGrid& grid = *basis.grid();
        const Eigen::Index off = basis.grid_offset();
        for (std::size_t i = 0; i < grid.size(); ++i)
            g(off + static_cast<Eigen::Index>(i)) = grid.weight(i);
    }
    // Tr(G Lambda G W) without forming products: sum_ij g_i Lambda_ij g_j W_ji
    Complex tr(0.0, 0.0);
    const Eigen::MatrixXcd& Lm = lambda.matrix();
    const Eigen::MatrixXcd& Wm = W.matrix();
    for (Eigen::Index i = 0; i < Lm.rows(); ++i)
        for (Eigen::Index j = 0; j < Lm.cols(); ++j) tr += g(i) * Lm(i, j) * g(j) * Wm(j, i);
    if (imag_residual) *imag_residual = std::abs(tr.imag());
    return tr.real();
}

// Pairing components <psi|z_R>^(k) of a detector wave function with the
// Gamow-Jordan chain of a pole, realized through analytic continuation:
// conj(psi(.)) is lower-Hardy when psi is upper-Hardy, and its continuation
// to z_R equals conj of the continuation of psi to conj(z_R).  The k-th
// component carries Gamma^k/k! times the k-th derivative; only the k = 0
// normalization is physically fixed, see build_W_PT.
inline Eigen::VectorXcd pair_vector(const WaveFunction& psi, const PoleSpec& pole,
                                    double tol = kDefaultHardyTol) {
    const HardyReport rep = hardy_membership(psi, HalfPlane::upper, tol);
    if (!rep.is_hardy) throw NotHardyError("pair_vector: psi is not upper-Hardy");
    const Complex zbar = std::conj(pole.z());  // lies in the upper half plane
    Eigen::VectorXcd v(pole.order);
    double fk = 1.0;
    double gk = 1.0;
    for (int k = 0; k < pole.order; ++k) {
        if (k > 0) {
            fk *= k;
            gk *= pole.gamma;
        }
        const Complex dpsi = detail::continue_deriv_unchecked(psi, HalfPlane::upper, zbar, k);
        v(k) = gk / fk * std::conj(dpsi);
    }
    return v;
}

// Continuum + pole-block coordinates of a wave function over a composite
// basis (block components through the analytic-continuation pairing).
inline Eigen::VectorXcd embed_wavefunction(const WaveFunction& psi, const CompositeBasis& basis,
                                           double tol = kDefaultHardyTol) {
    if (!basis.grid() || *basis.grid() != psi.grid())
        throw ShapeError("embed_wavefunction: basis continuum grid must match the wave function");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(basis.dim());
    for (std::size_t p = 0; p < basis.poles().size(); ++p) {
        const Eigen::VectorXcd block = pair_vector(psi, basis.poles()[p], tol);
        v.segment(basis.block_offset(p), basis.poles()[p].order) = block;
    }
    const Eigen::Index off = basis.grid_offset();
    for (std::size_t i = 0; i < psi.size(); ++i)
        v(off + static_cast<Eigen::Index>(i)) = psi.samples()[i];
    return v;
}

// |v><v| with the standard (conjugating) bra.
inline StateOperator dyad(const CompositeBasis& basis, const Eigen::VectorXcd& v) {
    if (v.size() != basis.dim()) throw ShapeError("dyad: vector dimension does not match basis");
    return StateOperator(basis, v * v.adjoint());
}

// Breit-Wigner line shape of a pole sampled on a grid:
//   u(E) = sqrt(2 pi Gamma) * (i / 2 pi) / (E - z_R),
// the wave-function representation of the Gamow state; |u|^2 is the
// truncated Breit-Wigner energy density.
inline WaveFunction gamow_wavefunction(const PoleSpec& pole, const EnergyGrid& grid) {
    const double pref = std::sqrt(2.0 * detail::kPi * pole.gamma) / (2.0 * detail::kPi);
    RationalFunction rf({Complex(0.0, pref)}, {-pole.z(), Complex(1.0, 0.0)});
    return WaveFunction::from_closed_form(grid, rf);
}

// Decay / survival curve with a log-linear width fit over a time window.
struct DecayCurve {
    std::vector<double> times;
    std::vector<double> values;
    double gamma_fit = 0.0;
    double fit_residual = 0.0;
    std::array<double, 2> window{0.0, 0.0};
};

// Least-squares fit of log values to a line over [window[0], window[1]];
// returns {gamma, max |log deviation| over the window}.
inline std::array<double, 2> fit_gamma(const std::vector<double>& times,
                                       const std::vector<double>& values,
                                       const std::array<double, 2>& window) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < window[0] || times[i] > window[1]) continue;
        if (!(values[i] > 0.0)) continue;
        const double x = times[i], y = std::log(values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) throw ConfigError("fit_gamma: need at least two curve points inside the fit window");
    const double det = m * sxx - sx * sx;
    const double slope = (m * sxy - sx * sy) / det;
    const double icept = (sy * sxx - sx * sxy) / det;
    double resid = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < window[0] || times[i] > window[1]) continue;
        if (!(values[i] > 0.0)) continue;
        resid = std::max(resid, std::abs(std::log(values[i]) - (icept + slope * times[i])));
    }
    return {-slope, resid};
}

// Interpolated 1/e time of the curve: first crossing of values[0]/e,
// log-linear between bracketing samples.
inline double one_over_e_time(const DecayCurve& curve) {
    if (curve.values.empty() || !(curve.values.front() > 0.0))
        throw ConfigError("one_over_e_time: curve must start positive");
    const double target = std::log(curve.values.front()) - 1.0;
    for (std::size_t i = 1; i < curve.values.size(); ++i) {
        if (!(curve.values[i] > 0.0)) continue;
        const double la = std::log(curve.values[i - 1]);
        const double lb = std::log(curve.values[i]);
        if ((la - target) * (lb - target) <= 0.0 && la != lb) {
            const double u = (la - target) / (la - lb);
            return curve.times[i - 1] + u * (curve.times[i] - curve.times[i - 1]);
        }
    }
    throw ConfigError("one_over_e_time: curve does not cross 1/e of its initial value");
}

// Detection-rate curve of a pole-term state: the operator is evolved by the
// semigroup at every time (the exponential law is an output, not an input)
// and sandwiched with the detector pairing vector.  Unnormalized rates, by
// construction; the fitted width must reproduce the pole width exactly.
inline DecayCurve gamow_decay_curve(const WaveFunction& psi, const PoleSpec& pole,
                                    const std::vector<double>& times,
                                    double tol = kDefaultHardyTol) {
    for (double t : times)
        if (t < 0.0) throw CausalityError("gamow_decay_curve: all times must be >= 0");
    const Eigen::VectorXcd v = pair_vector(psi, pole, tol);
    const StateOperator W0 = build_W_PT(pole);
    const HamiltonianMatrix H = assemble_hamiltonian(W0.basis());
    DecayCurve curve;
    curve.times = times;
    curve.values.assign(times.size(), 0.0);
    parallel_for(times.size(), [&](std::size_t i) {
        const StateOperator Wt = evolve_state_operator(W0, H, times[i]);
        const Complex val = v.transpose() * Wt.matrix() * v.conjugate();
        curve.values[i] = std::abs(val);
    });
    curve.window = {0.5 / pole.gamma, 5.0 / pole.gamma};
    const auto fit = fit_gamma(curve.times, curve.values, curve.window);
    curve.gamma_fit = fit[0];
    curve.fit_residual = fit[1];
    return curve;
}

namespace detail {

// Moments M_m = integral_{-2}^{2} u^m e^{s u} du, m = 0..4.  Series branch
// for small |s| (the upward recurrence amplifies roundoff there).
inline std::array<Complex, 5> filon_moments(Complex s) {
    std::array<Complex, 5> M{};
    if (std::abs(s) < 0.8) {
        for (int m = 0; m < 5; ++m) {
            Complex acc(0.0, 0.0);
            Complex sj(1.0, 0.0);  // s^j / j!
            for (int j = 0; j < 48; ++j) {
                const int mj = m + j;
                if (mj % 2 == 0) {
                    const double ip = std::pow(2.0, mj + 2) / (mj + 1);
                    const Complex term = sj * ip;
                    acc += term;
                    if (std::abs(term) < 1e-20 * std::max(std::abs(acc), 1.0) && j > 8) break;
                }
                sj *= s / static_cast<double>(j + 1);
            }
            M[static_cast<std::size_t>(m)] = acc;
        }
    } else {
        const Complex e2p = std::exp(2.0 * s), e2m = std::exp(-2.0 * s);
        M[0] = (e2p - e2m) / s;
        double p2 = 1.0;
        for (int m = 1; m < 5; ++m) {
            p2 *= 2.0;
            const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
            M[static_cast<std::size_t>(m)] =
                (p2 * e2p - sgn * p2 * e2m) / s - (static_cast<double>(m) / s) * M[static_cast<std::size_t>(m - 1)];
        }
    }
    return M;
}

// integral y(x) e^{-i x t} dx on a uniform grid by composite Filon panels:
// quartic interpolation over 4-cell panels, quadratic/linear leftovers.
// Oscillation is integrated exactly; only the polynomial fit of y is
// approximate.
inline Complex filon_fourier(const EnergyGrid& grid, const std::vector<double>& y, double t) {
    const std::size_t n = grid.size();
    if (y.size() != n) throw ShapeError("filon_fourier: sample count mismatch");
    if (!grid.is_uniform()) throw GridError("filon_fourier: uniform grid required");
    const double h = grid.spacing();
    const Complex s = Complex(0.0, -t * h);
    const auto M = filon_moments(s);
    // inverse of the Vandermonde on u = -2..2 (rows: coefficients 1..u^4)
    static const double V[5][5] = {
        {0.0, 0.0, 1.0, 0.0, 0.0},
        {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12},
        {-1.0 / 24, 2.0 / 3, -5.0 / 4, 2.0 / 3, -1.0 / 24},
        {-1.0 / 12, 1.0 / 6, 0.0, -1.0 / 6, 1.0 / 12},
        {1.0 / 24, -1.0 / 6, 1.0 / 4, -1.0 / 6, 1.0 / 24}};
    Complex total(0.0, 0.0);
    std::size_t i = 0;
    while (i + 4 <= n - 1) {
        Complex panel(0.0, 0.0);
        for (int c = 0; c < 5; ++c) {
            double coef = 0.0;
            for (int q = 0; q < 5; ++q) coef += V[c][q] * y[i + static_cast<std::size_t>(q)];
            panel += coef * M[static_cast<std::size_t>(c)];
        }
        total += h * std::exp(Complex(0.0, -t * grid.point(i + 2))) * panel;
        i += 4;
    }
    std::size_t rem = n - 1 - i;
    if (rem >= 2) {
        const double ya = y[i], yb = y[i + 1], yc = y[i + 2];
        const double a = yb, b = 0.5 * (yc - ya), c = 0.5 * (yc - 2.0 * yb + ya);
        Complex m0, m1, m2;
        if (std::abs(s) < 0.4) {
            m0 = m1 = m2 = Complex(0.0, 0.0);
            Complex sj(1.0, 0.0);
            for (int j = 0; j < 40; ++j) {
                if (j % 2 == 0) {
                    m0 += sj * (2.0 / (j + 1));
                    m2 += sj * (2.0 / (j + 3));
                } else {
                    m1 += sj * (2.0 / (j + 2));
                }
                sj *= s / static_cast<double>(j + 1);
            }
        } else {
            const Complex ep = std::exp(s), em = std::exp(-s);
            m0 = (ep - em) / s;
            m1 = (ep + em) / s - (ep - em) / (s * s);
            m2 = (ep - em) / s - 2.0 * ((ep + em) / (s * s) - (ep - em) / (s * s * s));
        }
        total += h * std::exp(Complex(0.0, -t * grid.point(i + 1))) * (a * m0 + b * m1 + c * m2);
        i += 2;
        rem -= 2;
    }
    if (rem == 1) {
        Complex I0, I1;
        if (std::abs(s) < 1e-4) {
            I0 = h * (1.0 + s / 2.0 + s * s / 6.0 + s * s * s / 24.0);
            I1 = h * (0.5 + s / 3.0 + s * s / 8.0 + s * s * s / 30.0);
        } else {
            I0 = h * (std::exp(s) - 1.0) / s;
            I1 = h * (std::exp(s) * (s - 1.0) + 1.0) / (s * s);
        }
        total += std::exp(Complex(0.0, -t * grid.point(i))) * (y[i] * I0 + (y[i + 1] - y[i]) * I1);
    }
    return total;
}

}  // namespace detail

// Survival probability of a Hilbert-space state with spectrum bounded below:
//   P(t) = | integral |phi(E)|^2 e^{-iEt} dE |^2,
// normalized so P(0) = 1.  The Fourier factor is integrated exactly per
// panel (Filon), which keeps the deep-decay tail quantitative.
inline DecayCurve hilbert_survival_curve(const WaveFunction& phi, const std::vector<double>& times,
                                         bool allow_negative_times = false) {
    if (std::abs(phi.norm_sq() - 1.0) > 1e-6)
        throw ConfigError("hilbert_survival_curve: phi must be normalized");
    for (double t : times)
        if (t < 0.0 && !allow_negative_times)
            throw CausalityError("hilbert_survival_curve: negative time without the unitary flag");
    const std::size_t n = phi.size();
    std::vector<double> density(n);
    std::size_t support = 0;
    for (std::size_t i = 0; i < n; ++i) {
        density[i] = std::norm(phi.samples()[i]);
        if (density[i] > 0.0) ++support;
    }
    DecayCurve curve;
    curve.times = times;
    curve.values.assign(times.size(), 0.0);
    if (support <= 1) {
        // density concentrated on a single node: a stationary state of the
        // discretized spectrum, survival is identically one
        curve.values.assign(times.size(), 1.0);
        curve.window = {0.0, 0.0};
        return curve;
    }
    const Complex norm0 = detail::filon_fourier(phi.grid(), density, 0.0);
    parallel_for(times.size(), [&](std::size_t i) {
        const Complex I = detail::filon_fourier(phi.grid(), density, times[i]);
        curve.values[i] = std::norm(I / norm0);
    });
    curve.window = {0.0, 0.0};
    curve.gamma_fit = 0.0;
    curve.fit_residual = 0.0;
    return curve;
}

// | |<psi|phi(t)>|^2 - |<psi(t)|phi>|^2 | via the unitary path, both
// pictures; zero up to rounding for any real t.
inline double picture_equivalence_check(const WaveFunction& psi, const WaveFunction& phi, double t) {
    const double schroedinger = born_overlap(psi, unitary_evolve(phi, t));
    const double heisenberg = born_overlap(unitary_evolve(psi, -t), phi);
    return std::abs(schroedinger - heisenberg);
}

}  // namespace gamowkit
