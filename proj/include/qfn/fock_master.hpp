// fock_master.hpp — Hilbert-space operators for the two-qubit / cavity system
// and the four-matrix master-equation hierarchy driven by a single-photon (or
// vacuum) input field.
//
// Tensor ordering is qubit1 x qubit2 x cavity, with qubit basis {|g>, |e>}
// (index 0 = ground) and sigma_z = |g><g| - |e><e|.

#pragma once

#include <string>
#include <vector>

#include "qfn/network_params.hpp"
#include "qfn/pulses.hpp"
#include "qfn/types.hpp"

namespace qfn {

struct OperatorSet {
    int n_cav = 0;  // cavity truncation: levels 0..n_cav
    int dim = 0;    // 4 * (n_cav + 1)
    double kappa_tilde = 0.0;
    MatX h;                // Hamiltonian with detuned frequencies
    MatX l;                // sqrt(kappa_tilde) * a
    MatX sigma_z_1, sigma_z_2;
    MatX sigma_minus_1, sigma_minus_2;
    MatX a_annihilate;
};

OperatorSet build_operators(const NetworkParams& params, int n_cav);

// Basis index of |q1 q2 n> with q in {0=g, 1=e}.
int basis_index(const OperatorSet& ops, int q1, int q2, int n);

enum class InitialState { G1G20, E1G20, G1E20, G1G21 };

InitialState parse_initial_state(const std::string& label);
std::string to_string(InitialState state);

// rho11/rho00 start at |eta><eta|; rho10/rho01 at zero and stay each other's
// adjoint along the flow.
struct HierarchyState {
    MatX rho11, rho10, rho01, rho00;
    double t = 0.0;
};

HierarchyState initial_hierarchy_state(const OperatorSet& ops, InitialState label);

// The four coupled right-hand sides of the single-photon hierarchy,
// sign-for-sign:
//   d rho11 = L* rho11 + xi [rho01, Ldag] + conj(xi) [L, rho10]
//   d rho10 = L* rho10 + xi [rho00, Ldag]
//   d rho01 = L* rho01 + conj(xi) [L, rho00]
//   d rho00 = L* rho00
// with L* rho = -i[H, rho] + L rho Ldag - (Ldag L rho + rho Ldag L)/2.
HierarchyState hierarchy_rhs(const HierarchyState& state, cplx xi_t,
                             const OperatorSet& ops);

struct HierarchyRecord {
    double t = 0.0;
    double p_e1 = 0.0;
    double p_e2 = 0.0;
    double p_cavity = 0.0;  // <a^dag a>
    double tr_rho11 = 0.0;
    double tr_rho00 = 0.0;
    double herm_defect = 0.0;   // max |rho11 - rho11^dag|
    double cross_defect = 0.0;  // max |rho01 - rho10^dag|
    double min_eigenvalue = 0.0;
};

struct HierarchyTrajectory {
    std::vector<HierarchyRecord> records;
    std::vector<HierarchyState> states;  // populated when keep_states is set
    HierarchyState final_state;
    bool steady_state_reached = false;  // max |rhs| < 1e-10 before t_end
    double steady_time = 0.0;
};

struct IntegrationOptions {
    int record_stride = 1;
    bool keep_states = false;
    double trace_drift_limit = 1e-5;  // StepTooLarge beyond this
};

// Classic fixed-step RK4 over [t_start, t_end]; the pulse is evaluated at
// substep midpoints through the sampled grid's linear interpolant. Pass
// nullptr for a vacuum input.
HierarchyTrajectory integrate_hierarchy(const NetworkParams& params, int n_cav,
                                        const SampledPulse* pulse, InitialState initial,
                                        double t_start, double t_end, double dt,
                                        const IntegrationOptions& options = {});

// Start time taken from the pulse grid (0 for vacuum).
HierarchyTrajectory integrate_hierarchy(const NetworkParams& params, int n_cav,
                                        const SampledPulse* pulse, InitialState initial,
                                        double t_end, double dt,
                                        const IntegrationOptions& options = {});

// Partial trace over qubit 2 and the cavity.
Mat2 reduce_to_qubit1(const MatX& rho, int n_cav);

// Partial trace over the cavity; basis {g1g2, g1e2, e1g2, e1e2}.
Mat4 reduce_to_qubits(const MatX& rho, int n_cav);

double cavity_occupation(const MatX& rho, int n_cav);

// <e| rho |e>, clamped to [0, 1].
double excitation_probability(const Mat2& rho_qubit);

}  // namespace qfn
