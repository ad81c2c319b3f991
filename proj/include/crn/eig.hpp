// eig.hpp: eigenvalues of small dense real matrices.

#pragma once

#include <Eigen/Core>
#include <complex>
#include <vector>

namespace crn {

/// Eigenvalues of a real square matrix (side <= 64), sorted by (real, imag).
/// Backed by Hessenberg reduction + shifted QR; throws NumericalFault on
/// iteration failure.
std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& m);

/// True iff every eigenvalue has real part < -margin.
bool is_hurwitz(const Eigen::MatrixXd& m, double margin = 0.0);

double max_real_part(const std::vector<std::complex<double>>& spectrum);

}  // namespace crn
