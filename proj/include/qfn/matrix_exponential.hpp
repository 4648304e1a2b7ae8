// matrix_exponential.hpp — dense complex matrix exponential

#pragma once

#include "qfn/types.hpp"

namespace qfn {

// e^(a t) via scaling-and-squaring with a Pade approximant.
MatX matrix_exponential(const MatX& a, double t);

Mat3 matrix_exponential(const Mat3& a, double t);

}  // namespace qfn
