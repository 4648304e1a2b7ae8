// linear_response.hpp — transfer function, impulse response, and the
// steady-state single-photon output pulse of the network.

#pragma once

#include <vector>

#include "qfn/linear_model.hpp"
#include "qfn/pulses.hpp"
#include "qfn/types.hpp"

namespace qfn {

// g(t) = delta(t) + C e^{At} B for t >= 0. The Dirac part is never
// discretized; output_pulse carries it as the additive xi(t) term.
struct ImpulseResponse {
    cplx dirac_weight{1.0, 0.0};
    LinearModel model;

    // C e^{At} B for t >= 0, zero for t < 0.
    cplx smooth(double t) const;
};

ImpulseResponse impulse_response(const LinearModel& model);

// Closed form of the smooth part on the equal-detuning resonance slice,
// -kt (cosh(chi t/4) - (kt/chi) sinh(chi t/4)) e^{-kt t/4} with
// chi = sqrt(kt^2 - 16 (G1^2 + G2^2)); real-valued for all branches.
cplx impulse_smooth_resonant(double kappa_eff, double coupling_sq_sum, double t);

// The printed rational transfer function; throws PoleProximity when s is
// within tolerance of an eigenvalue of A.
cplx transfer_at(const LinearModel& model, cplx s);

// Resolvent route 1 + C (sI - A)^{-1} B, the cross-validation path.
cplx transfer_resolvent(const LinearModel& model, cplx s);

struct FrequencyResponse {
    std::vector<double> omega_grid;
    std::vector<cplx> values;
};

FrequencyResponse frequency_response(const LinearModel& model,
                                     const std::vector<double>& omega_grid);

struct OutputPulseOptions {
    double extension_cap_factor = 10.0;  // max extension past the input span
    double decay_threshold = 1e-6;       // of the running output peak
};

// eta(t_k) = xi(t_k) + trapezoidal convolution of C e^{A(t-tau)} B with xi.
// The grid extends past the input until the state contribution decays; in the
// marginal case the run proceeds only after checking that the marginal mode
// is invisible in the input-output path (|C v1| and |w1 B| below tolerance).
SampledPulse output_pulse(const LinearModel& model, const SampledPulse& input,
                          const OutputPulseOptions& options = {});

// Time for |eta| to fall below fraction*peak for good, measured from the peak.
double decay_time(const SampledPulse& pulse, double fraction = 0.01);

}  // namespace qfn
