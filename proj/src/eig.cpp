#include "crn/eig.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <limits>

#include "crn/kinetics.hpp"

namespace crn {

std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("eigenvalues: not square");
    if (m.rows() > 64) throw std::invalid_argument("eigenvalues: side > 64 unsupported");
    if (m.rows() == 0) return {};
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NumericalFault("eigenvalues: QR iteration did not converge");
    std::vector<std::complex<double>> out(static_cast<size_t>(m.rows()));
    for (int i = 0; i < m.rows(); ++i) out[static_cast<size_t>(i)] = solver.eigenvalues()(i);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

bool is_hurwitz(const Eigen::MatrixXd& m, double margin) {
    return max_real_part(eigenvalues(m)) < -margin;
}

double max_real_part(const std::vector<std::complex<double>>& spectrum) {
    double mx = -std::numeric_limits<double>::infinity();
    for (const auto& z : spectrum) mx = std::max(mx, z.real());
    return mx;
}

}  // namespace crn
