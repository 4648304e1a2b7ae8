#include "qfn/linear_model.hpp"

#include <cmath>

namespace qfn {

SlhTriple slh_reduce(const NetworkParams& params) {
    validate(params);
    SlhTriple triple;
    triple.scattering = 1.0;
    triple.coupling_rate = effective_kappa(params);
    triple.hamiltonian_params = params;
    return triple;
}

LinearModel build_linear_model(const NetworkParams& params, bool closed_loop) {
    validate(params);
    const double kappa_eff = closed_loop ? effective_kappa(params) : params.kappa;

    LinearModel m;
    m.params = params;
    m.kappa_eff = kappa_eff;
    m.closed_loop = closed_loop;

    const cplx i = kImag;
    m.a.setZero();
    m.a(0, 0) = i * params.delta_omega_1;
    m.a(1, 1) = i * params.delta_omega_2;
    m.a(2, 2) = -i * params.delta_omega_r - kappa_eff / 2.0;
    m.a(0, 2) = -i * params.coupling_1;
    m.a(2, 0) = -i * params.coupling_1;
    m.a(1, 2) = -i * params.coupling_2;
    m.a(2, 1) = -i * params.coupling_2;

    m.b.setZero();
    m.b(2) = -std::sqrt(kappa_eff);
    m.c = -m.b.transpose();
    m.d = cplx{1.0, 0.0};
    return m;
}

}  // namespace qfn
