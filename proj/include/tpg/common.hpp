#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace tpg {

using cplx    = std::complex<double>;
using index_t = std::int64_t;

using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;
using SparseXc = Eigen::SparseMatrix<cplx>;

inline constexpr double pi = 3.14159265358979323846;

} // namespace tpg
