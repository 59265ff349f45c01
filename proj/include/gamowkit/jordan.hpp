#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "gamowkit/errors.hpp"
#include "gamowkit/grid.hpp"
#include "gamowkit/smatrix.hpp"

namespace gamowkit {

// Coefficients c_0 .. c_{r-1} of a generalized state over the Gamow-Jordan
// chain of one pole: F = sum_k |k> c_k.
struct JordanKetCoeffs {
    PoleSpec pole;
    Eigen::VectorXcd coeffs;

    JordanKetCoeffs(PoleSpec p, Eigen::VectorXcd c) : pole(p), coeffs(std::move(c)) {
        if (coeffs.size() != pole.order)
            throw ShapeError("JordanKetCoeffs: coefficient count must equal the pole order");
    }

    double norm() const { return coeffs.norm(); }
};

// Ordered direct sum of Jordan blocks (one per pole, `order` vectors each)
// and an optional discretized continuum.  Block index ranges are contiguous
// in declaration order, followed by the grid.
class CompositeBasis {
public:
    explicit CompositeBasis(std::vector<PoleSpec> poles,
                            std::optional<EnergyGrid> grid = std::nullopt)
        : poles_(std::move(poles)), grid_(std::move(grid)) {}

    const std::vector<PoleSpec>& poles() const { return poles_; }
    const std::optional<EnergyGrid>& grid() const { return grid_; }

    Eigen::Index block_dim() const {
        Eigen::Index d = 0;
        for (const auto& p : poles_) d += p.order;
        return d;
    }
    Eigen::Index dim() const {
        return block_dim() + (grid_ ? static_cast<Eigen::Index>(grid_->size()) : 0);
    }
    Eigen::Index block_offset(std::size_t pole_index) const {
        if (pole_index >= poles_.size()) throw IndexError("block_offset: pole index out of range");
        Eigen::Index off = 0;
        for (std::size_t i = 0; i < pole_index; ++i) off += poles_[i].order;
        return off;
    }
    Eigen::Index grid_offset() const { return block_dim(); }

    bool operator==(const CompositeBasis& o) const {
        if (poles_.size() != o.poles_.size()) return false;
        for (std::size_t i = 0; i < poles_.size(); ++i)
            if (!(poles_[i] == o.poles_[i])) return false;
        if (grid_.has_value() != o.grid_.has_value()) return false;
        if (grid_ && *grid_ != *o.grid_) return false;
        return true;
    }
    bool operator!=(const CompositeBasis& o) const { return !(*this == o); }

private:
    std::vector<PoleSpec> poles_;
    std::optional<EnergyGrid> grid_;
};

// Matrix of the Hamiltonian over a composite basis, stored in the component
// representation: for each pole an order-r Jordan block with z_R on the
// diagonal and Gamma on the first subdiagonal, then the real continuum
// diagonal.
//
// Convention (dual pairing).  The stored block is the matrix acting on
// component columns <psi|z>^(k).  The action of the Hamiltonian on ket
// coefficient vectors c (F = sum_k |k> c_k) is the TRANSPOSE of the stored
// block, i.e. z_R I + Gamma N with N the superdiagonal shift.  Worked 2x2
// example (order 2, ket action B = block^T):
//     B = [[z, Gamma], [0, z]],   B e1 = Gamma e0 + z e1,
// which is the chain relation H|1> = z|1> + Gamma|0>, while the stored
// component matrix is [[z, 0], [Gamma, z]].  All chain/evolution formulas in
// this library act on ket coefficients and therefore use B.
class HamiltonianMatrix {
public:
    HamiltonianMatrix(CompositeBasis basis, Eigen::MatrixXcd data)
        : basis_(std::move(basis)), data_(std::move(data)) {
        if (data_.rows() != basis_.dim() || data_.cols() != basis_.dim())
            throw ShapeError("HamiltonianMatrix: data dimension does not match basis");
    }

    const CompositeBasis& basis() const { return basis_; }
    const Eigen::MatrixXcd& data() const { return data_; }

    // Ket-action matrix of one pole's block (transpose of the stored block).
    Eigen::MatrixXcd ket_block(std::size_t pole_index) const {
        const auto& p = basis_.poles().at(pole_index);
        const Eigen::Index off = basis_.block_offset(pole_index);
        return data_.block(off, off, p.order, p.order).transpose();
    }

private:
    CompositeBasis basis_;
    Eigen::MatrixXcd data_;
};

inline HamiltonianMatrix assemble_hamiltonian(const CompositeBasis& basis) {
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(basis.dim(), basis.dim());
    Eigen::Index off = 0;
    for (const auto& p : basis.poles()) {
        for (int k = 0; k < p.order; ++k) {
            H(off + k, off + k) = p.z();
            if (k > 0) H(off + k, off + k - 1) = Complex(p.gamma, 0.0);
        }
        off += p.order;
    }
    if (basis.grid()) {
        const EnergyGrid& g = *basis.grid();
        for (std::size_t i = 0; i < g.size(); ++i)
            H(off + static_cast<Eigen::Index>(i), off + static_cast<Eigen::Index>(i)) =
                Complex(g.point(i), 0.0);
    }
    return HamiltonianMatrix(basis, std::move(H));
}

// Zeroth-order Gamow ket, normalized by sqrt(2 pi Gamma).
inline JordanKetCoeffs gamow_ket(const PoleSpec& pole) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(pole.order);
    c(0) = Complex(std::sqrt(2.0 * 3.14159265358979323846 * pole.gamma), 0.0);
    return JordanKetCoeffs(pole, std::move(c));
}

// || (H - z_R)^power e_k || on the pole's block, in the ket action.
inline double chain_defect(const HamiltonianMatrix& H, const PoleSpec& pole, int k, int power) {
    std::size_t pidx = static_cast<std::size_t>(-1);
    for (std::size_t i = 0; i < H.basis().poles().size(); ++i)
        if (H.basis().poles()[i] == pole) pidx = i;
    if (pidx == static_cast<std::size_t>(-1))
        throw ConfigError("chain_defect: pole is not part of the basis");
    if (k < 0 || k >= pole.order) throw IndexError("chain_defect: k out of range");
    const Eigen::MatrixXcd B = H.ket_block(pidx);
    Eigen::MatrixXcd shifted = B - pole.z() * Eigen::MatrixXcd::Identity(pole.order, pole.order);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(pole.order);
    v(k) = Complex(1.0, 0.0);
    for (int q = 0; q < power; ++q) v = shifted * v;
    return v.norm();
}

// Degree test of the generalized eigenvector equation:
// (H - z_R)^{k+1} annihilates the k-th chain vector.
inline double verify_generalized_eigen(const HamiltonianMatrix& H, const PoleSpec& pole, int k) {
    return chain_defect(H, pole, k, k + 1);
}

// Complex matrix over a composite basis housing state operators.  The bra
// side of all pole-block dyads uses the transpose (bilinear) pairing, so the
// block operators below are complex-symmetric rather than Hermitian.
class StateOperator {
public:
    StateOperator(CompositeBasis basis, Eigen::MatrixXcd matrix)
        : basis_(std::move(basis)), matrix_(std::move(matrix)) {
        if (matrix_.rows() != basis_.dim() || matrix_.cols() != basis_.dim())
            throw ShapeError("StateOperator: matrix dimension does not match basis");
        if (!matrix_.allFinite()) throw ConfigError("StateOperator: entries must be finite");
    }

    const CompositeBasis& basis() const { return basis_; }
    const Eigen::MatrixXcd& matrix() const { return matrix_; }

private:
    CompositeBasis basis_;
    Eigen::MatrixXcd matrix_;
};

// W^(n) = sum_{k=0}^{n} |k><n-k| on the pole's block (anti-diagonal band of
// bilinear dyads), rank n+1.
inline StateOperator build_W_n(const PoleSpec& pole, int n) {
    if (n < 0 || n > pole.order - 1) throw IndexError("build_W_n: n out of range");
    CompositeBasis basis({pole});
    Eigen::MatrixXcd W = Eigen::MatrixXcd::Zero(pole.order, pole.order);
    for (int k = 0; k <= n; ++k) W(k, n - k) = Complex(1.0, 0.0);
    return StateOperator(std::move(basis), std::move(W));
}

// Pole-term state operator
//   W_PT = 2 pi Gamma sum_{n=0}^{r-1} C(r, n+1) (-i)^n W^(n);
// for r = 1 this is the Gamow dyad 2 pi Gamma |0><0|.
inline StateOperator build_W_PT(const PoleSpec& pole) {
    const int r = pole.order;
    CompositeBasis basis({pole});
    Eigen::MatrixXcd W = Eigen::MatrixXcd::Zero(r, r);
    auto binom = [](int a, int b) {
        double v = 1.0;
        for (int i = 0; i < b; ++i) v = v * static_cast<double>(a - i) / static_cast<double>(i + 1);
        return v;
    };
    const double pref = 2.0 * 3.14159265358979323846 * pole.gamma;
    Complex phase(1.0, 0.0);
    for (int n = 0; n < r; ++n) {
        const double c = binom(r, n + 1);
        for (int k = 0; k <= n; ++k) W(k, n - k) += pref * c * phase;
        phase *= Complex(0.0, -1.0);
    }
    return StateOperator(std::move(basis), std::move(W));
}

// Identity observable in the weighted representation: block part is the
// plain identity, continuum diagonal carries 1/w_i so that the quadrature
// trace of (identity * W) reduces to the plain weighted trace of W.
inline StateOperator identity_observable(const CompositeBasis& basis) {
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(basis.dim(), basis.dim());
    if (basis.grid()) {
        const EnergyGrid& g = *basis.grid();
        const Eigen::Index off = basis.grid_offset();
        for (std::size_t i = 0; i < g.size(); ++i)
            M(off + static_cast<Eigen::Index>(i), off + static_cast<Eigen::Index>(i)) =
                Complex(1.0 / g.weight(i), 0.0);
    }
    return StateOperator(basis, std::move(M));
}

}  // namespace gamowkit
