#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "gamowkit/errors.hpp"
#include "gamowkit/fft.hpp"
#include "gamowkit/wavefunction.hpp"

namespace gamowkit {

enum class HalfPlane { upper, lower };

inline const char* to_string(HalfPlane hp) { return hp == HalfPlane::upper ? "upper" : "lower"; }

// Numerical verdict for half-plane analyticity of an energy wave function.
//
// Convention note (physicist vs mathematician labels): prepared-state wave
// functions phi+(E) must extend analytically into the LOWER half plane and
// detected-observable wave functions psi-(E) into the UPPER half plane.  The
// superscript follows scattering usage, the half-plane label follows Hardy
// usage, and the two run opposite to each other.  This library always names
// the half plane explicitly.
struct HardyReport {
    bool is_hardy = false;
    double titchmarsh_residual = 0.0;
    double wrong_side_leakage = 0.0;
    double tolerance_used = 0.0;
    // |f| at the grid edge exceeds 1e-8 * max|f|: the finite window may not
    // capture the function's decay.
    bool decay_warning = false;
};

inline constexpr double kDefaultHardyTol = 1e-6;

namespace detail {

inline constexpr double kPi = 3.14159265358979323846;
// Fraction of samples (each side) used for the asymptotic tail fit.
inline constexpr double kTailFitFraction = 0.20;
// Raised-cosine blend from samples to the fitted asymptote, outer fraction
// of the window.
inline constexpr double kBlendFraction = 0.10;
// The grid is extended with the fitted tail to this multiple of its half
// width before the convolution; the remaining tail is added in closed form.
inline constexpr int kExtensionFactor = 8;
inline constexpr double kEdgeDecayThreshold = 1e-8;

// Fitted asymptote f(E) ~ sum_p coeff[p-1] / (E - center)^p, p = 1..3.
struct TailFit {
    double center = 0.0;
    std::array<Complex, 3> coeff{};
};

inline TailFit fit_tail(const EnergyGrid& grid, const std::vector<Complex>& f) {
    const std::size_t n = grid.size();
    TailFit fit;
    fit.center = 0.5 * (grid.e0() + grid.e_max());
    const std::size_t m = std::max<std::size_t>(16, static_cast<std::size_t>(kTailFitFraction * n));
    std::vector<std::size_t> idx;
    idx.reserve(2 * m);
    for (std::size_t i = 0; i < m && i < n; ++i) idx.push_back(i);
    for (std::size_t i = n - std::min(m, n); i < n; ++i) idx.push_back(i);
    const double scale = std::max(std::abs(grid.e0() - fit.center), std::abs(grid.e_max() - fit.center));
    Eigen::MatrixXcd A(idx.size(), 3);
    Eigen::VectorXcd b(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
        const double t = grid.point(idx[r]) - fit.center;
        const double u = scale / t;
        A(static_cast<Eigen::Index>(r), 0) = Complex(u, 0.0);
        A(static_cast<Eigen::Index>(r), 1) = Complex(u * u, 0.0);
        A(static_cast<Eigen::Index>(r), 2) = Complex(u * u * u, 0.0);
        b(static_cast<Eigen::Index>(r)) = f[idx[r]];
    }
    Eigen::VectorXcd c = A.colPivHouseholderQr().solve(b);
    for (int p = 1; p <= 3; ++p)
        fit.coeff[static_cast<std::size_t>(p - 1)] = c(p - 1) * std::pow(scale, p);
    return fit;
}

inline Complex tail_eval(const TailFit& fit, double e) {
    const double t = e - fit.center;
    if (std::abs(t) < 1e-12) return Complex(0.0, 0.0);
    Complex acc(0.0, 0.0);
    double tp = t;
    for (int p = 0; p < 3; ++p) {
        acc += fit.coeff[static_cast<std::size_t>(p)] / tp;
        tp *= t;
    }
    return acc;
}

// p.v. integral_T^inf t^-p / (x - t) dt, |x| < T.
inline double tail_integral_right(int p, double x, double T) {
    const double lg = std::log1p(-x / T);
    switch (p) {
        case 1: return x != 0.0 ? lg / x : -1.0 / T;
        case 2: return x != 0.0 ? 1.0 / (x * T) + lg / (x * x) : -1.0 / (2.0 * T * T);
        case 3: return x != 0.0 ? 1.0 / (2.0 * x * T * T) + 1.0 / (x * x * T) + lg / (x * x * x)
                                : -1.0 / (3.0 * T * T * T);
        default: throw IndexError("tail_integral_right: p out of range");
    }
}

// integral_{-inf}^{-T} t^-p / (x - t) dt, |x| < T.
inline double tail_integral_left(int p, double x, double T) {
    const double lg = std::log1p(x / T);
    double J;
    switch (p) {
        case 1: J = x != 0.0 ? lg / x : 1.0 / T; break;
        case 2: J = x != 0.0 ? 1.0 / (x * T) - lg / (x * x) : -1.0 / (2.0 * T * T); break;
        case 3: J = x != 0.0 ? 1.0 / (2.0 * x * T * T) - 1.0 / (x * x * T) + lg / (x * x * x)
                             : 1.0 / (3.0 * T * T * T); break;
        default: throw IndexError("tail_integral_left: p out of range");
    }
    return (p % 2 == 0) ? J : -J;
}

// Cached forward FFT of the odd sinc-interpolation kernel k_m = 2/(pi m)
// (odd lags only), keyed by (fft size, filled lag count).
inline const std::vector<Complex>& kernel_fft(std::size_t size, std::size_t lags) {
    static std::mutex mu;
    static std::map<std::pair<std::size_t, std::size_t>, std::vector<Complex>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(size, lags);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<Complex> ker(size, Complex(0.0, 0.0));
    for (std::size_t m = 1; m < lags; m += 2) {
        const double v = 2.0 / (kPi * static_cast<double>(m));
        ker[m] += Complex(v, 0.0);
        ker[size - m] += Complex(-v, 0.0);
    }
    fft_inplace(ker, false);
    return cache.emplace(key, std::move(ker)).first->second;
}

// Hilbert transform on sample values.  Convention:
//   H[f](x) = (1/pi) p.v. integral f(t) / (x - t) dt,
// so H[cos] = sin and H[f] = -i f for boundary values of upper-half-plane
// analytic functions.
inline std::vector<Complex> hilbert_samples(const EnergyGrid& grid, const std::vector<Complex>& f) {
    const std::size_t n = grid.size();
    const double h = grid.spacing();
    const TailFit fit = fit_tail(grid, f);

    // Extended grid: same spacing, reaching kExtensionFactor half-widths on
    // both sides of the window center.
    const double t0 = grid.e0() - fit.center;
    const double t1 = grid.e_max() - fit.center;
    const double half_width = std::max(std::abs(t0), std::abs(t1));
    const double reach = kExtensionFactor * half_width;
    const auto n_left = static_cast<std::size_t>(std::ceil((reach + t0) / h));
    const auto n_right = static_cast<std::size_t>(std::ceil((reach - t1) / h));
    const std::size_t next = n_left + n + n_right;

    std::vector<Complex> g(next);
    for (std::size_t i = 0; i < n_left; ++i)
        g[i] = tail_eval(fit, grid.e0() - h * static_cast<double>(n_left - i));
    for (std::size_t i = 0; i < n; ++i) g[n_left + i] = f[i];
    for (std::size_t i = 0; i < n_right; ++i)
        g[n_left + n + i] = tail_eval(fit, grid.e_max() + h * static_cast<double>(i + 1));

    // Raised-cosine blend of samples into the fitted asymptote over the
    // outer 10% of the window; suppresses the handoff jump that would
    // otherwise leak into the transform.
    const std::size_t nb = std::max<std::size_t>(2, static_cast<std::size_t>(kBlendFraction * n));
    for (std::size_t i = 0; i < nb; ++i) {
        const double w = 0.5 * (1.0 - std::cos(kPi * static_cast<double>(i) / static_cast<double>(nb)));
        const Complex al = tail_eval(fit, grid.point(i));
        const Complex ar = tail_eval(fit, grid.point(n - 1 - i));
        g[n_left + i] = w * f[i] + (1.0 - w) * al;
        g[n_left + n - 1 - i] = w * f[n - 1 - i] + (1.0 - w) * ar;
    }

    const std::size_t size = next_pow2(2 * next);
    std::vector<Complex> gp(size, Complex(0.0, 0.0));
    std::copy(g.begin(), g.end(), gp.begin());
    fft_inplace(gp, false);
    const std::vector<Complex>& kf = kernel_fft(size, next);
    for (std::size_t i = 0; i < size; ++i) gp[i] *= kf[i];
    fft_inplace(gp, true);

    std::vector<Complex> out(n);
    const double TR = (grid.e_max() - fit.center) + h * (static_cast<double>(n_right) + 0.5);
    const double TL = -(grid.e0() - fit.center) + h * (static_cast<double>(n_left) + 0.5);
    for (std::size_t i = 0; i < n; ++i) {
        Complex rem(0.0, 0.0);
        const double x = grid.point(i) - fit.center;
        for (int p = 1; p <= 3; ++p)
            rem += fit.coeff[static_cast<std::size_t>(p - 1)] *
                   (tail_integral_right(p, x, TR) + tail_integral_left(p, x, TL));
        out[i] = gp[n_left + i] + rem / kPi;
    }
    return out;
}

inline double l2_weighted(const EnergyGrid& grid, const std::vector<Complex>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += grid.weight(i) * std::norm(v[i]);
    return std::sqrt(s);
}

}  // namespace detail

// Principal-value Hilbert transform of f on its own (uniform) grid, computed
// by zero-padded FFT convolution of the sinc-interpolation kernel over a
// tail-extended window, raised-cosine taper between samples and fitted tail.
inline WaveFunction hilbert_transform(const WaveFunction& f) {
    if (f.size() < 16) throw ResolutionError("hilbert_transform: need n >= 16");
    if (!f.grid().is_uniform()) throw GridError("hilbert_transform: grid must be uniform");
    return WaveFunction(f.grid(), detail::hilbert_samples(f.grid(), f.samples()));
}

// Membership test for the Hardy class of the given half plane.  Two
// independent criteria are combined:
//   (a) Titchmarsh: Im f must equal +-H[Re f];
//   (b) Paley-Wiener: the Fourier transform of f must be supported on a
//       single half line in the conjugate (time) domain.
// Both are evaluated after removing the fitted slow rational tail through
// exactly-Hardy reference poles, which keeps window-truncation effects out
// of the verdict.
inline HardyReport hardy_membership(const WaveFunction& f, HalfPlane hp,
                                    double tol = kDefaultHardyTol) {
    if (!(tol > 0.0)) throw ConfigError("hardy_membership: tolerance must be positive");
    if (f.size() < 16) throw ResolutionError("hardy_membership: need n >= 16");
    if (!f.grid().is_uniform()) throw GridError("hardy_membership: grid must be uniform");

    HardyReport rep;
    rep.tolerance_used = tol;
    rep.decay_warning = f.edge_decay_ratio() > detail::kEdgeDecayThreshold;

    const double nrm = f.norm();
    if (nrm == 0.0) {
        rep.is_hardy = true;
        return rep;
    }

    const EnergyGrid& grid = f.grid();
    const std::size_t n = f.size();

    // --- Titchmarsh test ---
    std::vector<Complex> re_part(n);
    for (std::size_t i = 0; i < n; ++i) re_part[i] = Complex(f.samples()[i].real(), 0.0);
    const std::vector<Complex> h_re = detail::hilbert_samples(grid, re_part);
    const double sign = (hp == HalfPlane::upper) ? 1.0 : -1.0;
    std::vector<Complex> resid(n);
    for (std::size_t i = 0; i < n; ++i)
        resid[i] = Complex(f.samples()[i].imag() - sign * h_re[i].real(), 0.0);
    rep.titchmarsh_residual = detail::l2_weighted(grid, resid) / nrm;

    // --- Paley-Wiener test ---
    const detail::TailFit fit = detail::fit_tail(grid, f.samples());
    const double L = 0.5 * (grid.e_max() - grid.e0());
    const double b0 = L / 16.0;
    const Complex s = (hp == HalfPlane::upper) ? Complex(0.0, b0) : Complex(0.0, -b0);
    // Match d_p / (t + s)^p to the fitted c1/t + c2/t^2 + c3/t^3.
    std::array<Complex, 3> d;
    d[0] = fit.coeff[0];
    d[1] = fit.coeff[1] + d[0] * s;
    d[2] = fit.coeff[2] - d[0] * s * s + 2.0 * d[1] * s;

    const std::size_t m = detail::next_pow2(n);
    std::vector<Complex> gg(m, Complex(0.0, 0.0)), ff(m, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        const Complex t(grid.point(i) - fit.center, 0.0);
        Complex sub(0.0, 0.0);
        Complex dp(1.0, 0.0);
        for (int p = 0; p < 3; ++p) {
            dp *= (t + s);
            sub += d[static_cast<std::size_t>(p)] / dp;
        }
        gg[i] = f.samples()[i] - sub;
        ff[i] = f.samples()[i];
    }
    detail::fft_inplace(gg, false);
    detail::fft_inplace(ff, false);
    // Bin k < m/2 carries time frequency +k, bins above m/2 carry negative
    // times.  Upper-Hardy functions live at nonnegative times.
    double wrong = 0.0, total = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const bool negative_time = k > m / 2;
        total += std::norm(ff[k]);
        const bool is_wrong = (hp == HalfPlane::upper) ? negative_time : (!negative_time && k != 0 && k != m / 2);
        if (is_wrong) wrong += std::norm(gg[k]);
    }
    rep.wrong_side_leakage = total > 0.0 ? wrong / total : 0.0;

    rep.is_hardy = rep.titchmarsh_residual <= tol && rep.wrong_side_leakage <= tol;
    return rep;
}

namespace detail {

// Quadrature kernel for evaluating the k-th derivative of the continuation
// at z: base Cauchy kernel k!/(E-z)^{k+1} minus reflected-pole terms at
// conj(z) chosen to cancel the 1/E..1/E^3 asymptotics.  The reflected terms
// integrate to zero against any function of the target Hardy class, so the
// value is unchanged while the truncated-tail error drops by three orders of
// the window size.
inline Complex continue_deriv_unchecked(const WaveFunction& f, HalfPlane hp, Complex z, int k) {
    const Complex zb = std::conj(z);
    auto fact = [](int q) {
        double r = 1.0;
        for (int i = 2; i <= q; ++i) r *= i;
        return r;
    };
    auto comb = [](int a, int b) {
        double r = 1.0;
        for (int i = 0; i < b; ++i) r = r * static_cast<double>(a - i) / static_cast<double>(i + 1);
        return r;
    };
    // coeff of E^-m in k!/(E-z)^(k+1) is k! C(m-1,k) z^(m-k-1) for m >= k+1
    std::array<Complex, 3> alpha{};
    for (int m = 1; m <= 3; ++m) {
        Complex sum = (m >= k + 1) ? fact(k) * comb(m - 1, k) * std::pow(z, m - k - 1) : Complex(0.0, 0.0);
        for (int j = 1; j < m; ++j)
            sum -= alpha[static_cast<std::size_t>(j - 1)] * fact(j - 1) * comb(m - 1, j - 1) *
                   std::pow(zb, m - j);
        alpha[static_cast<std::size_t>(m - 1)] = sum / fact(m - 1);
    }
    const EnergyGrid& grid = f.grid();
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Complex E(grid.point(i), 0.0);
        Complex kern = fact(k) / std::pow(E - z, k + 1);
        Complex dp(1.0, 0.0);
        for (int j = 1; j <= 3; ++j) {
            dp *= (E - zb);
            kern -= alpha[static_cast<std::size_t>(j - 1)] * fact(j - 1) / dp;
        }
        acc += grid.weight(i) * f.samples()[i] * kern;
    }
    const double orientation = (hp == HalfPlane::upper) ? 1.0 : -1.0;
    return orientation * acc / Complex(0.0, 2.0 * kPi);
}

}  // namespace detail

// Cauchy-integral continuation of a Hardy-class wave function to a point z
// strictly inside its half plane of analyticity.
inline Complex analytic_continue(const WaveFunction& f, HalfPlane hp, Complex z,
                                 double tol = kDefaultHardyTol) {
    const double im = z.imag();
    const double h = f.grid().spacing();
    if (hp == HalfPlane::upper ? im <= h : -im <= h)
        throw DomainError("analytic_continue: z must lie strictly inside the half plane");
    if (f.norm() == 0.0) return Complex(0.0, 0.0);
    const HardyReport rep = hardy_membership(f, hp, tol);
    if (!rep.is_hardy)
        throw NotHardyError("analytic_continue: wave function fails the Hardy test for this half plane");
    return detail::continue_deriv_unchecked(f, hp, z, 0);
}

}  // namespace gamowkit
