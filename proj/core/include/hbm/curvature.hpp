#pragma once

#include <stdexcept>
#include <vector>

#include "hbm/spectral.hpp"
#include "hbm/tangent.hpp"

namespace hbm {

/// Sectional curvature of one horizontal plane at one scale t, split into its
/// three Green-paired terms and the Gram denominator.
struct CurvaturePoint {
    double t = 0.0;
    double term_oneill = 0.0;   ///< 3 <G0 P*_XY, P*_XY>
    double term_gauss_1 = 0.0;  ///< <G2 Q_XX, Q_YY>
    double term_gauss_2 = 0.0;  ///< <G2 Q_XY, Q_XY>
    double gram = 0.0;          ///< |X|^2 |Y|^2 - <X,Y>^2
    double K = 0.0;             ///< (oneill + gauss_1 - gauss_2) / gram
};

struct LambdaEstimate {
    double slope = 0.0;   ///< fitted d log|K| / d log t
    double lambda = 0.0;  ///< extrapolated limit of t^{4/3} K, times the limit Gram
    cplx c0_f1{0.0, 0.0};
    cplx c0_f2{0.0, 0.0};
    bool sign_change = false;  ///< K changed sign across the sweep
    std::vector<CurvaturePoint> points;
};

struct DegeneratePlaneError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Resolution knobs shared by the curvature pipeline.
struct CurvatureConfig {
    int ell_max = 8;        ///< angular cutoff of the degree-2 Green sums
    std::size_t n = 300;    ///< radial nodes
    double r_min = 1e-3;    ///< inner radius of the fixed model disk
    double r_max = 1.0;
};

/// Gram-Schmidt-adjust f2 against f1 in the real L^2 pairing of the
/// decoupled-limit frames (direction only; no normalization).
HolQuadDiff orthogonalize_against(const OperatorContext& ctx, const HolQuadDiff& f1,
                                  const HolQuadDiff& f2);

/// Gram determinant of the decoupled-limit frames of (f1, f2).
double gram_infinity(const OperatorContext& ctx, const HolQuadDiff& f1, const HolQuadDiff& f2);

/// One curvature evaluation at the scale of fd.  Throws DegeneratePlaneError
/// when the projected frames are numerically dependent (gram < 1e-6).
CurvaturePoint sectional_curvature(const HolQuadDiff& f1, const HolQuadDiff& f2,
                                   const FiducialData& fd, int ell_max = 8);

/// Curvature sweep over t_list (evaluations run concurrently), slope fit of
/// log|K| against log t, and extraction of the limiting coefficient
/// lambda = lim t^{4/3} K multiplied by the limit Gram of the original pair,
/// so that lambda is quadratic in each argument.
LambdaEstimate scan_and_fit(const PainleveSolution& sol, const HolQuadDiff& f1,
                            const HolQuadDiff& f2, const std::vector<double>& t_list,
                            const CurvatureConfig& cfg = {});

struct LocalityReport {
    double lambda_full = 0.0;
    double lambda_truncated = 0.0;  ///< constant coefficients only
    double rel_diff = 0.0;
};

/// Compare the single-scale coefficient t^{4/3} K x Gram against the same
/// quantity with f1, f2 truncated to their constant terms; the relative
/// difference must shrink as t grows.
LocalityReport lambda_locality_check(const PainleveSolution& sol, const HolQuadDiff& f1,
                                     const HolQuadDiff& f2, double t,
                                     const CurvatureConfig& cfg = {});

}  // namespace hbm
