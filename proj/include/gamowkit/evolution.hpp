#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>

#include "gamowkit/errors.hpp"
#include "gamowkit/hardy.hpp"
#include "gamowkit/jordan.hpp"
#include "gamowkit/wavefunction.hpp"

namespace gamowkit {

// Scale factors below exp(-700) are flushed to zero instead of drifting
// through subnormals; the flag is surfaced in EvolutionReport diagnostics.
inline constexpr double kUnderflowExponent = 700.0;

namespace detail {

inline void require_forward(double t, const char* where) {
    if (t < 0.0)
        throw CausalityError(std::string(where) +
                             ": semigroup evolution is defined for t >= 0 only");
}

// Upper-triangular Toeplitz sum_nu (s Gamma)^nu / nu! N^nu with N the
// superdiagonal shift; the polynomial part of the chain propagator.
inline Eigen::MatrixXcd chain_poly(int r, Complex s_gamma) {
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(r, r);
    std::vector<Complex> pw(static_cast<std::size_t>(r));
    Complex acc(1.0, 0.0);
    for (int nu = 0; nu < r; ++nu) {
        pw[static_cast<std::size_t>(nu)] = acc;
        acc *= s_gamma / static_cast<double>(nu + 1);
    }
    for (int a = 0; a < r; ++a)
        for (int b = a; b < r; ++b) M(a, b) = pw[static_cast<std::size_t>(b - a)];
    return M;
}

inline Complex decay_scale(const PoleSpec& pole, double t, bool* flushed = nullptr) {
    // exp(-i z_R t) = exp(-i E_R t) exp(-Gamma t / 2)
    if (0.5 * pole.gamma * t > kUnderflowExponent) {
        if (flushed) *flushed = true;
        return Complex(0.0, 0.0);
    }
    return std::exp(Complex(0.0, -pole.e_r * t)) * std::exp(-0.5 * pole.gamma * t);
}

}  // namespace detail

// Closed-form forward evolution of chain coefficients:
//   c_m(t) = e^{-i z_R t} sum_nu (Gamma^nu/nu!) (-i t)^nu c_{m+nu},
// identical to exp(-i B t) c with B the block's ket-action matrix.
inline JordanKetCoeffs evolve_jordan_ket(const JordanKetCoeffs& s, double t) {
    detail::require_forward(t, "evolve_jordan_ket");
    const int r = s.pole.order;
    bool flushed = false;
    const Complex scale = detail::decay_scale(s.pole, t, &flushed);
    Eigen::MatrixXcd U = detail::chain_poly(r, Complex(0.0, -t * s.pole.gamma));
    Eigen::VectorXcd c = scale * (U * s.coeffs);
    return JordanKetCoeffs(s.pole, std::move(c));
}

// Left factor of the two-sided state-operator evolution over a full basis:
// block-diagonal chain propagators plus continuum phases.
inline Eigen::MatrixXcd left_propagator(const CompositeBasis& basis, double t) {
    Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(basis.dim(), basis.dim());
    Eigen::Index off = 0;
    for (const auto& p : basis.poles()) {
        L.block(off, off, p.order, p.order) =
            detail::decay_scale(p, t) * detail::chain_poly(p.order, Complex(0.0, -t * p.gamma));
        off += p.order;
    }
    if (basis.grid()) {
        const EnergyGrid& g = *basis.grid();
        for (std::size_t i = 0; i < g.size(); ++i)
            L(off + static_cast<Eigen::Index>(i), off + static_cast<Eigen::Index>(i)) =
                std::exp(Complex(0.0, -g.point(i) * t));
    }
    return L;
}

// Right factor: bilinear-dual chain evolution (conjugate eigenvalue phase,
// +it powers), transposed to act from the right; continuum gets e^{+iEt}.
inline Eigen::MatrixXcd right_propagator(const CompositeBasis& basis, double t) {
    Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(basis.dim(), basis.dim());
    Eigen::Index off = 0;
    for (const auto& p : basis.poles()) {
        bool flushed = false;
        Complex scale;
        if (0.5 * p.gamma * t > kUnderflowExponent) {
            scale = Complex(0.0, 0.0);
            flushed = true;
        } else {
            // exp(+i conj(z_R) t) = exp(+i E_R t) exp(-Gamma t / 2)
            scale = std::exp(Complex(0.0, p.e_r * t)) * std::exp(-0.5 * p.gamma * t);
        }
        (void)flushed;
        R.block(off, off, p.order, p.order) =
            scale * detail::chain_poly(p.order, Complex(0.0, t * p.gamma)).transpose();
        off += p.order;
    }
    if (basis.grid()) {
        const EnergyGrid& g = *basis.grid();
        for (std::size_t i = 0; i < g.size(); ++i)
            R(off + static_cast<Eigen::Index>(i), off + static_cast<Eigen::Index>(i)) =
                std::exp(Complex(0.0, g.point(i) * t));
    }
    return R;
}

// W(t) = L(t) W R(t): forward semigroup evolution of a state operator.
inline StateOperator evolve_state_operator(const StateOperator& W, const HamiltonianMatrix& H,
                                           double t) {
    detail::require_forward(t, "evolve_state_operator");
    if (W.basis() != H.basis())
        throw ShapeError("evolve_state_operator: operator and Hamiltonian bases differ");
    const Eigen::MatrixXcd L = left_propagator(W.basis(), t);
    const Eigen::MatrixXcd R = right_propagator(W.basis(), t);
    return StateOperator(W.basis(), L * W.matrix() * R);
}

// Evolution of the pole-term operator; equals e^{-Gamma t} W_PT.
inline StateOperator evolve_W_PT(const PoleSpec& pole, double t) {
    detail::require_forward(t, "evolve_W_PT");
    const StateOperator W = build_W_PT(pole);
    const HamiltonianMatrix H = assemble_hamiltonian(W.basis());
    return evolve_state_operator(W, H, t);
}

// Unitary (group) evolution of a continuum wave function; defined for all
// real t and exactly norm preserving.  Any closed form is dropped since the
// evolved function is no longer rational in E.
inline WaveFunction unitary_evolve(const WaveFunction& f, double t) {
    std::vector<Complex> s(f.samples());
    for (std::size_t i = 0; i < s.size(); ++i)
        s[i] *= std::exp(Complex(0.0, -f.grid().point(i) * t));
    return WaveFunction(f.grid(), std::move(s));
}

// Functional action <psi(t)|E-> = e^{-iEt} conj(psi(E)) of a scattering ket
// on a detector wave function, forward times only.  Distinguishes
// Lippmann-Schwinger kets (semigroup) from plain Dirac kets (group): the
// upper-Hardy membership requirement is what makes the one-sided law hold.
inline Complex ls_ket_action(const WaveFunction& psi, double E, double t,
                             double tol = kDefaultHardyTol) {
    detail::require_forward(t, "ls_ket_action");
    const EnergyGrid& g = psi.grid();
    if (E < g.e0() - 1e-12 || E > g.e_max() + 1e-12)
        throw DomainError("ls_ket_action: E outside the grid");
    const HardyReport rep = hardy_membership(psi, HalfPlane::upper, tol);
    if (!rep.is_hardy) throw NotHardyError("ls_ket_action: psi is not upper-Hardy");
    Complex val;
    if (psi.closed_form()) {
        val = psi.closed_form()->eval(Complex(E, 0.0));
    } else {
        // linear interpolation between bracketing nodes
        const double h = g.spacing();
        const auto i = static_cast<std::size_t>(
            std::min(std::max((E - g.e0()) / h, 0.0), static_cast<double>(g.size() - 2)));
        const double u = (E - g.point(i)) / h;
        val = (1.0 - u) * psi.samples()[i] + u * psi.samples()[i + 1];
    }
    return std::exp(Complex(0.0, -E * t)) * std::conj(val);
}

// || U(t2) U(t1) s - U(t1 + t2) s || / || s ||.
inline double semigroup_composition_check(const JordanKetCoeffs& s, double t1, double t2) {
    detail::require_forward(t1, "semigroup_composition_check");
    detail::require_forward(t2, "semigroup_composition_check");
    const JordanKetCoeffs two_step = evolve_jordan_ket(evolve_jordan_ket(s, t1), t2);
    const JordanKetCoeffs one_step = evolve_jordan_ket(s, t1 + t2);
    const double n0 = s.norm();
    if (n0 == 0.0) return 0.0;
    return (two_step.coeffs - one_step.coeffs).norm() / n0;
}

// Diagnostics record for one evolution call.
struct EvolutionReport {
    std::uint64_t input_hash = 0;
    double t = 0.0;
    std::string mode;
    JordanKetCoeffs output;
    double norm_before = 0.0;
    double norm_after = 0.0;
    std::optional<double> oracle_residual;
    bool underflow_flushed = false;
};

namespace detail {

inline std::uint64_t fnv1a(const unsigned char* data, std::size_t len, std::uint64_t seed = 1469598103934665603ULL) {
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= data[i];
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace detail

inline EvolutionReport evolve_ket_report(const JordanKetCoeffs& s, double t) {
    detail::require_forward(t, "evolve_ket_report");
    bool flushed = 0.5 * s.pole.gamma * t > kUnderflowExponent;
    JordanKetCoeffs out = evolve_jordan_ket(s, t);
    EvolutionReport rep{0, t, "semigroup_ket", out, s.norm(), out.norm(), std::nullopt, flushed};
    std::uint64_t h = detail::fnv1a(reinterpret_cast<const unsigned char*>(s.coeffs.data()),
                                    sizeof(Complex) * static_cast<std::size_t>(s.coeffs.size()));
    h = detail::fnv1a(reinterpret_cast<const unsigned char*>(&t), sizeof(double), h);
    rep.input_hash = h;
    return rep;
}

}  // namespace gamowkit
