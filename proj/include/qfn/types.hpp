// types.hpp — shared scalar and matrix aliases

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qfn {

using cplx = std::complex<double>;

using Mat2 = Eigen::Matrix2cd;
using Mat3 = Eigen::Matrix3cd;
using Mat4 = Eigen::Matrix4cd;
using Mat6 = Eigen::Matrix<cplx, 6, 6>;
using MatX = Eigen::MatrixXcd;
using Vec3 = Eigen::Vector3cd;
using RowVec3 = Eigen::RowVector3cd;
using VecX = Eigen::VectorXcd;

inline constexpr cplx kImag{0.0, 1.0};

}  // namespace qfn
