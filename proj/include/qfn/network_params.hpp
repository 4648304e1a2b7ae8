// network_params.hpp — physical parameters of the cavity-mediated two-qubit network
//
// All frequencies and rates are dimensionless, in units of the qubit
// transition frequency (normalized to 1). coupling_k stores the combined
// qubit-cavity coupling Gamma_k; the microscopic factors g_k and theta_k
// are never separate inputs.

#pragma once

#include <nlohmann/json_fwd.hpp>

#include "qfn/types.hpp"

namespace qfn {

struct NetworkParams {
    double delta_omega_1 = 0.0;  // detuning of qubit 1 from the input carrier
    double delta_omega_2 = 0.0;  // detuning of qubit 2
    double delta_omega_r = 0.0;  // detuning of the cavity
    double coupling_1 = 0.0;     // Gamma_1 >= 0
    double coupling_2 = 0.0;     // Gamma_2 >= 0
    double kappa = 0.0;          // cavity decay rate, > 0
    double mu = 0.0;             // beamsplitter reflectivity, in [0, 1)
};

// Throws std::domain_error with all violations listed.
void validate(const NetworkParams& params);

// kappa_tilde = (1 - mu) / (1 + mu) * kappa; throws std::domain_error on a
// bad domain.
double effective_kappa(double kappa, double mu);

inline double effective_kappa(const NetworkParams& p) {
    return effective_kappa(p.kappa, p.mu);
}

// Strict ingestion: the object must carry exactly the keys
// delta_omega_1, delta_omega_2, delta_omega_r, gamma_1, gamma_2, kappa, mu.
NetworkParams params_from_json(const nlohmann::json& j);

nlohmann::json params_to_json(const NetworkParams& params);

}  // namespace qfn
