// linear_model.hpp — SLH reduction of the feedback loop and the linear
// input-output state-space model acting on the vacuum-projected amplitudes
// (sigma_-1, sigma_-2, a).

#pragma once

#include "qfn/network_params.hpp"
#include "qfn/types.hpp"

namespace qfn {

// The beamsplitter feedback only rescales the cavity coupling; scattering
// stays the identity and the Hamiltonian is untouched. The coupling
// operator sqrt(kappa_tilde) a is represented by its rate.
struct SlhTriple {
    double scattering = 1.0;
    double coupling_rate = 0.0;  // kappa_tilde
    NetworkParams hamiltonian_params;
};

SlhTriple slh_reduce(const NetworkParams& params);

struct LinearModel {
    Mat3 a;
    Vec3 b;
    RowVec3 c;
    cplx d{1.0, 0.0};
    NetworkParams params;     // parameters the model was built from
    double kappa_eff = 0.0;   // rate in b/c and in a(2,2): kappa_tilde or kappa
    bool closed_loop = true;
};

// closed_loop=true uses kappa_tilde = (1-mu)/(1+mu) kappa; false keeps kappa.
LinearModel build_linear_model(const NetworkParams& params, bool closed_loop = true);

}  // namespace qfn
