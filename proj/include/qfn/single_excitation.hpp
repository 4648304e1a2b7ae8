// single_excitation.hpp — the one-excitation Schroedinger dynamics of the
// vacuum-driven network: amplitude ODEs, closed-form solutions, steady
// states, the emitted-pulse amplitude, and full-inversion verification.
//
// Amplitudes: s1 phase factor of the emitted-photon branch, s2 |g1 e2 0>,
// s3 |e1 g2 0>, s4 |g1 g2 1>; initial condition (s2, s3, s4) = (0, 1, 0).

#pragma once

#include <vector>

#include "qfn/fock_master.hpp"
#include "qfn/network_params.hpp"
#include "qfn/pulses.hpp"
#include "qfn/types.hpp"

namespace qfn {

struct AmplitudeState {
    cplx s1{1.0, 0.0};
    cplx s2{0.0, 0.0};
    cplx s3{1.0, 0.0};
    cplx s4{0.0, 0.0};
    double t = 0.0;
    // integral of kappa_tilde |s4|^2 up to t: norm^2 already emitted into
    // the field, so |s2|^2+|s3|^2+|s4|^2+emitted_norm_sq stays 1.
    double emitted_norm_sq = 0.0;
};

// Time derivative (the emitted_norm_sq slot carries kappa_tilde |s4|^2).
AmplitudeState amplitude_rhs(const AmplitudeState& state, const NetworkParams& params);

// Fixed-step RK4 of the augmented system on [0, t_end].
std::vector<AmplitudeState> integrate_amplitudes(const NetworkParams& params,
                                                 double t_end, double dt,
                                                 int record_stride = 1);

// Closed forms on the equal-detuning slice; throws DetuningMismatch when
// |delta_1 - delta_2| exceeds tolerance and requires a nonzero coupling sum.
// The degenerate exponent case is evaluated by its confluent limit.
AmplitudeState analytic_solution(const NetworkParams& params, double t);

enum class AlphaFlag { Finite, AlphaZero, AlphaInfinite };

struct SteadyState {
    cplx s1_inf{0.0, 0.0};
    cplx s2_inf{0.0, 0.0};
    cplx s3_inf{0.0, 0.0};
    double alpha = 0.0;  // Gamma_1 / Gamma_2 where finite
    AlphaFlag flag = AlphaFlag::Finite;
};

SteadyState steady_state(const NetworkParams& params);

// Default integration horizon max(50/kappa_tilde, 20/Gamma_min_positive).
double steady_horizon(const NetworkParams& params);

struct EmittedPulse {
    SampledPulse eta;   // normalized output pulse shape
    double s1_inf = 0.0;  // norm of the raw field amplitude sqrt(kt) s4 / s1
};

// Requires the trajectory to extend until |s4| has decayed to 1e-8 of its
// peak; throws NotConverged otherwise.
EmittedPulse emitted_pulse(const std::vector<AmplitudeState>& trajectory,
                           const NetworkParams& params);

struct DqdDensity {
    Mat4 rho;  // basis {g1g2, g1e2, e1g2, e1e2}
    double purity = 0.0;
};

// The steady two-qubit mixed state for equal detunings, built from the
// closed-form amplitudes; alpha must be finite and >= 0.
DqdDensity dqd_steady_density(double alpha);

struct InversionReport {
    double p_e1_at_terminal = 0.0;
    double pulse_norm_sq = 0.0;
    HierarchyTrajectory trajectory;
};

// Drives the Fock hierarchy with the inverting pulse built from the
// parameters. Requires one qubit decoupled and all transitions in mutual
// resonance.
InversionReport verify_full_inversion(const NetworkParams& params, double t_terminal,
                                      double dt, int n_cav = 2,
                                      double post_terminal = 0.0);

// Same pipeline with the superposition input (both couplings active).
InversionReport superposition_inversion(const NetworkParams& params, cplx coeff1,
                                        cplx coeff2, double t_terminal, double dt,
                                        int n_cav = 2, double post_terminal = 0.0);

}  // namespace qfn
