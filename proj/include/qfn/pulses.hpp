// pulses.hpp — single-photon pulse catalogue: rising exponential, Gaussian,
// the inverting pulse, superpositions of inverting pulses, and sampled
// envelopes on uniform time grids.

#pragma once

#include <optional>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qfn/network_params.hpp"
#include "qfn/types.hpp"

namespace qfn {

struct TimeGrid {
    double t_start = 0.0;
    double dt = 0.0;
    int n_points = 0;

    double t(int k) const { return t_start + k * dt; }
    double t_end() const { return t(n_points - 1); }
    double span() const { return (n_points - 1) * dt; }
    bool operator==(const TimeGrid&) const = default;
};

// Uniform grid covering [t_start, t_end] with spacing <= dt_max.
TimeGrid make_grid(double t_start, double t_end, double dt_max);

// xi(t) = sqrt(gamma) e^{(gamma/2 + i omega_p) t} for t <= 0, else 0.
struct RisingExponential {
    double gamma = 0.0;
    double omega_p = 0.0;
};

// xi(t) = (Omega^2 / 2 pi)^{1/4} exp(-Omega^2 (t - t_peak)^2 / 4).
struct GaussianPulse {
    double bandwidth = 0.0;  // Omega
    double t_peak = 0.0;
};

// The pulse that fully excites the qubit coupled at rate `coupling` at the
// terminal time, when the other qubit is decoupled. Support is r <= t_terminal.
struct InvertingPulse {
    double kappa_tilde = 0.0;
    double coupling = 0.0;  // Gamma_k
    double t_terminal = 0.0;
};

// coeff1 * nu_1 + coeff2 * nu_2 where nu_k are the two inverting components of
// the same network (the exponents pool both couplings); the coefficients obey
// |c1 G1 + c2 G2|^2 = G1^2 + G2^2 so that the photon state stays normalized.
struct SuperpositionPulse {
    cplx coeff1{0.0, 0.0};
    cplx coeff2{0.0, 0.0};
    InvertingPulse first;
    InvertingPulse second;
};

struct SampledPulse {
    TimeGrid grid;
    std::vector<cplx> values;
    double captured_norm_sq = 0.0;  // trapezoidal norm^2 of the samples

    // Linear interpolation between samples; 0 outside the grid.
    cplx value_at(double t) const;
};

using PulseSpec = std::variant<RisingExponential, GaussianPulse, InvertingPulse,
                               SuperpositionPulse, SampledPulse>;

cplx evaluate(const PulseSpec& spec, double t);

// Closed-form inverting pulse (both exponents and the prefactor from the same
// coupling). At kappa_tilde = 4 Gamma the printed formula is 0/0 and the
// confluent limit -i Gamma sqrt(kt) (t-r) e^{-kt (t-r)/4} is used.
cplx inverting_pulse(double kappa_tilde, double coupling, double t_terminal, double r);

// Component with the exponent rates pooled over both couplings; reduces to
// inverting_pulse when pooled == coupling.
cplx inverting_component(double kappa_tilde, double coupling, double pooled,
                         double t_terminal, double r);

// The three rising functions B^T e^{A^dag (t - r)} of the closed-loop model
// (rows: qubit 1, qubit 2, cavity); zero for r > t_terminal.
Vec3 nu_functions(const NetworkParams& params, double t_terminal, double r);

// Grid that captures the spec's support with documented truncation bounds.
TimeGrid default_grid(const PulseSpec& spec, std::optional<double> dt_override = {});

// Pointwise evaluation on the grid; throws SupportTruncated if the captured
// norm^2 falls below 0.9999.
SampledPulse sample(const PulseSpec& spec, const TimeGrid& grid);

double pulse_norm_sq(const SampledPulse& pulse);
double pulse_norm(const SampledPulse& pulse);

// |c1 G1 + c2 G2|^2 - (G1^2 + G2^2), relative to G1^2 + G2^2.
double superposition_constraint_dev(cplx coeff1, cplx coeff2, double coupling1,
                                    double coupling2);

// Pointwise coeff1 * p1 + coeff2 * p2 on identical grids; throws
// NormConstraintViolated when the coefficient constraint fails.
SampledPulse superpose(cplx coeff1, cplx coeff2, double coupling1, double coupling2,
                       const SampledPulse& p1, const SampledPulse& p2);

// JSON pulse specs carry a "type" tag; "kappa_tilde" may be omitted for the
// inverting variants when a context value is supplied.
PulseSpec parse_pulse_spec(const nlohmann::json& j,
                           std::optional<double> kappa_tilde_context = {});
nlohmann::json pulse_spec_to_json(const PulseSpec& spec);

// Columns t, re, im with round-trip-exact numerals.
void write_pulse_csv(const SampledPulse& pulse, const std::string& path);

}  // namespace qfn
