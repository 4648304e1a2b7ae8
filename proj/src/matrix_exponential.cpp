#include "qfn/matrix_exponential.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace qfn {

MatX matrix_exponential(const MatX& a, double t) {
    return (a * t).exp();
}

Mat3 matrix_exponential(const Mat3& a, double t) {
    return (a * t).exp();
}

}  // namespace qfn
