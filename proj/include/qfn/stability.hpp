// stability.hpp — stability classification of the 3x3 network matrix via the
// complex-coefficient characteristic cubic, the generalized Hurwitz matrix,
// the Routh-like table, and the Sign Pair Criterion.
//
// The cubic is kept in the scaled convention of the coefficient formulas:
// its roots are exactly twice the eigenvalues of the state matrix. Half-plane
// membership is unchanged by the scaling, and the eigenvalue routine undoes
// it when reporting roots of det(lambda I - A).

#pragma once

#include <array>

#include "qfn/linear_model.hpp"
#include "qfn/network_params.hpp"
#include "qfn/types.hpp"

namespace qfn {

// lambda^3 + (p1 + i q1) lambda^2 + (p2 + i q2) lambda + (p3 + i q3),
// monic by construction.
struct ComplexCubic {
    double p1 = 0.0, p2 = 0.0, p3 = 0.0;
    double q1 = 0.0, q2 = 0.0, q3 = 0.0;

    cplx coeff2() const { return {p1, q1}; }
    cplx coeff1() const { return {p2, q2}; }
    cplx coeff0() const { return {p3, q3}; }
};

// Exact coefficient formulas in terms of the network parameters
// (closed loop, kappa_tilde).
ComplexCubic characteristic_polynomial(const NetworkParams& params);

// Same scaled convention, built from an arbitrary 3x3 matrix:
// coefficients of the monic polynomial whose roots are 2*eig(a).
ComplexCubic cubic_from_matrix(const Mat3& a);

// 6x6 generalized Hurwitz matrix laid out exactly as printed, with the
// imaginary unit multiplying the q entries.
Mat6 generalized_hurwitz(const ComplexCubic& c);

struct RouthTable {
    std::array<cplx, 6> r{};      // R1..R6; guarded entries are 0 when degenerate
    std::array<cplx, 6> delta{};  // leading principal minors D1..D6
    bool degenerate = false;      // some needed divisor minor fell below tol_det
    int degenerate_at = 0;        // smallest j in 3..6 with |D_{j-2}| < tol_det, else 0

    // Pair products R1R2, R3R4, R5R6 evaluated as p1, D3/D1, D5/D3. The even
    // minors cancel inside each pair, so the products stay well defined even
    // when the element-wise table degenerates (e.g. all-real coefficients).
    std::array<cplx, 3> pair_products{};
    bool products_degenerate = false;  // an odd divisor minor fell below tol_det
};

RouthTable routh_like_table(const Mat6& m);

enum class StabilityKind { Hurwitz, Marginal, Unstable };

struct StabilityVerdict {
    StabilityKind kind = StabilityKind::Marginal;
    std::array<cplx, 3> eigenvalues{};  // witness, sorted by (re, im)
    RouthTable routh;
};

// Hurwitz iff the three sign-pair conditions hold strictly; everything else
// (including degenerate tables) maps to Marginal. The witness comes from the
// eigenvalue oracle on the closed-loop model.
StabilityVerdict spc_classify(const NetworkParams& params);

// Roots of det(lambda I - a), computed from the companion matrix of the
// scaled cubic and halved back; sorted by real part, then imaginary part.
std::array<cplx, 3> eigenvalues(const LinearModel& model);

// Closed-form eigenvalues on the equal-detuning slice delta_1 = delta_2:
// { i delta_s, (-kt - 2i(dr - ds) -/+ sqrt((kt + 2i(dr + ds))^2 - 16 g^2))/4 }.
std::array<cplx, 3> equal_detuning_eigenvalues(const NetworkParams& params);

// Right eigenvector of a for the eigenvalue closest to target.
Vec3 eigenvector_for(const Mat3& a, cplx target);

inline constexpr double kTolFreq = 1e-9;  // delta_1 == delta_2 test

}  // namespace qfn
