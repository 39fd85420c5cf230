#pragma once

#include <vector>

#include "hbm/ops.hpp"

namespace hbm {

/// Polynomial coefficient data of a variation of the quadratic differential:
/// fdot(z) = sum_k coeffs[k] z^k.
struct HolQuadDiff {
    std::vector<cplx> coeffs;
};

/// Tangent data at the model pair in normalized variables: alpha stores
/// t^{-1} (connection variation), phi the Higgs variation with the factor t
/// removed.  Both fields reference the context grid.
struct TangentVector {
    Field alpha;
    Field phi;
    double t = 1.0;
};

/// Variation of the model family along fdot obtained by differentiating the
/// explicit profiles at fixed t (no gauge fixing applied).
TangentVector raw_variation(const OperatorContext& ctx, const HolQuadDiff& fdot);

/// The su(2)-valued rotation generator gamma_t whose action removes the
/// non-holomorphic part of the raw variation.
Field gauge_rotation(const OperatorContext& ctx, const HolQuadDiff& fdot);

/// Gauge-corrected variation, assembled directly from closed-form profiles.
TangentVector corrected_tangent(const OperatorContext& ctx, const HolQuadDiff& fdot);

/// Same vector computed the long way: raw variation minus the normalized
/// action of gauge_rotation.  Cross-check for corrected_tangent.
TangentVector corrected_tangent_by_subtraction(const OperatorContext& ctx,
                                               const HolQuadDiff& fdot);

/// Limit of the corrected variation as t -> infinity: alpha = 0 and the
/// decoupled Higgs profile phi_infinity.
TangentVector limit_tangent(const OperatorContext& ctx, const HolQuadDiff& fdot);

/// L^2 norm of the gauge constraint residual of v (zero exactly in Coulomb
/// gauge with respect to the model pair).
double coulomb_residual(const OperatorContext& ctx, const TangentVector& v);

struct CoulombResult {
    TangentVector projected;
    double residual_before = 0.0;
    double residual_after = 0.0;
    double gauge_norm = 0.0;  ///< L^2 norm of the solved gauge parameter
};

/// Orthogonal projection of v onto the Coulomb-gauge slice: solve the
/// degree-0 Laplace problem for the gauge parameter channel by channel
/// (angular indices up to n_gauge_max) and subtract its action.
CoulombResult coulomb_project(const OperatorContext& ctx, const TangentVector& v,
                              int n_gauge_max);

/// Riemannian pairing of tangent vectors: <alpha,beta> + <phi,psi> in L^2.
double tangent_inner(const TangentVector& v, const TangentVector& w);

}  // namespace hbm
