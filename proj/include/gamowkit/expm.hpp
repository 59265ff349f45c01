#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace gamowkit {

// Dense matrix exponential by scaling and squaring with a truncated Taylor
// series.  Intended for the small block matrices handled here (dim <= 64);
// used by the jordan-demo diagnostics.
inline Eigen::MatrixXcd expm(const Eigen::MatrixXcd& A) {
    const Eigen::Index n = A.rows();
    const double nrm = A.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    double scale = 1.0;
    while (nrm * scale > 0.5) {
        scale *= 0.5;
        ++squarings;
    }
    const Eigen::MatrixXcd As = A * scale;
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd sum = term;
    for (int k = 1; k <= 24; ++k) {
        term = (term * As) / static_cast<double>(k);
        sum += term;
        if (term.cwiseAbs().maxCoeff() < 1e-18 * sum.cwiseAbs().maxCoeff()) break;
    }
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    return sum;
}

}  // namespace gamowkit
