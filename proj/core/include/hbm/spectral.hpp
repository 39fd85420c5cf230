#pragma once

#include <functional>
#include <vector>

#include "hbm/fiducial.hpp"
#include "hbm/modes.hpp"
#include "hbm/ops.hpp"

namespace hbm {

/// First-order map from a field pair to a field pair, e.g. the adjoint of the
/// linearized self-duality operator, or the gauge-action derivative.
using PairEngine = std::function<FieldPair(const FieldPair&)>;

/// Galerkin discretization of one invariant angular block of a nonnegative
/// operator T^* T: stiffness A = M^T W M from the first-order factor T
/// probed on the nodal basis, diagonal mass B from the L^2 weights.
/// Eigenvalues and Green solves refer to the pencil (A, B); natural
/// (variational Neumann) conditions at both radial ends, optional Dirichlet
/// masking of edge nodes.
struct ModeBlockOp {
    ModeParam mode;
    const RadialGrid* grid = nullptr;
    double t = 1.0;
    int degree = 2;  ///< 2 for the pair Laplacian, 0 for the gauge Laplacian
    int dim = 0;     ///< real degrees of freedom per node
    std::size_t n = 0;
    int kd = 0;                      ///< half bandwidth of A
    std::vector<double> a_band;      ///< lower symmetric band, col-major, ld = kd+1
    std::vector<double> chol_band;   ///< Cholesky factor (filled on first solve)
    std::vector<double> bdiag;       ///< size n*dim
    std::vector<bool> masked;        ///< Dirichlet-masked packed indices
    bool factorized = false;
};

/// Assemble the block of T^*T on the given mode subspace from the engine T.
/// The engine must be linear over the reals and first order (stencil reach
/// <= 4 nodes), which holds for the operators used here.
/// dirichlet_left/right mask that many nodes at the radial ends.
ModeBlockOp assemble_block(const RadialGrid& grid, const ModeParam& mode, double t, int degree,
                           const PairEngine& engine, std::size_t dirichlet_left = 0,
                           std::size_t dirichlet_right = 0);

/// Degree-2 block: T = adjoint of the linearized operator, T^*T = the pair
/// Laplacian.
ModeBlockOp assemble_pair_block(const OperatorContext& ctx, const ModeParam& mode,
                                std::size_t dirichlet_left = 0, std::size_t dirichlet_right = 0);

/// Degree-0 block: T = gauge-action derivative, T^*T = the gauge Laplacian.
ModeBlockOp assemble_gauge_block(const OperatorContext& ctx, const ModeParam& mode);

/// x = A^{-1} rhs (factorizes on first use).  Masked entries are forced to 0.
std::vector<double> block_solve(ModeBlockOp& op, std::vector<double> rhs);

std::vector<double> block_apply_stiffness(const ModeBlockOp& op, const std::vector<double>& x);

/// Smallest eigenvalue of the pencil (A, B) by inverse iteration.
double smallest_eigenvalue(ModeBlockOp& op, int max_iter = 400, double tol = 1e-10);

/// Galerkin right-hand side <eta, basis_i> for a field pair living (up to
/// projection) in the block's subspace.
std::vector<double> rhs_from_field(const ModeBlockOp& op, const FieldPair& eta);

/// Packed solution of the block Green equation T^*T xi = eta.
std::vector<double> green_solve(ModeBlockOp& op, const FieldPair& eta);

/// <G eta, zeta> = rhs(zeta)^T A^{-1} rhs(eta).
double green_pairing(ModeBlockOp& op, const FieldPair& eta, const FieldPair& zeta);

/// Reassemble a packed block vector into a field pair.
FieldPair field_from_packed(const ModeBlockOp& op, const std::vector<double>& x);

/// Closed-form radial action of the pair Laplacian on the sign-+ subspace at
/// angular index ell >= 1, applied to the component tuple
/// (mu, sigma_{l+2}, sigma_{-l+2}, tau_{l+1}, tau_{-l+1}) in the dof order of
/// make_pair_mode(ell, Plus).  Independent of the Galerkin assembly path;
/// agrees with deformation_laplacian2 projected back onto the mode to the
/// stencil's discretization order.
std::vector<std::vector<cplx>> apply_pair_plus_explicit(
    const FiducialData& fd, int ell, const std::vector<std::vector<cplx>>& comp);

/// FiducialData of the decoupled limit: h = 0, f = 1/8 identically.
FiducialData make_limiting_fiducial(double t, const RadialGrid& grid);

enum class DecaySubspace { Parallel, Perpendicular };
enum class DecayBranch { SigmaPlus, SigmaMinus };

struct DecayRateResult {
    int ell = 0;
    DecaySubspace subspace = DecaySubspace::Parallel;
    DecayBranch branch = DecayBranch::SigmaPlus;
    double slope = 0.0;     ///< d log u / d log r (parallel branches)
    double rate_rho = 0.0;  ///< d log u / d rho (perpendicular branches)
};

/// Decay of homogeneous solutions of the limiting pair Laplacian on the
/// sign-+ block: power-law slope on the commuting (sigma = tau) subspace,
/// exponential rate in rho = (8/3) t r^{3/2} on the orthogonal complement.
DecayRateResult homogeneous_decay_rate(int ell, DecayBranch branch, DecaySubspace subspace,
                                       std::size_t n = 800);

struct EigScalingResult {
    std::vector<double> t_list;
    std::vector<double> lambda;
    double fitted_exponent = 0.0;
};

/// Smallest block eigenvalue on disks of radius t^{-2/3} (inner radius mapped
/// to a fixed rho), against t; the exponent should fit 4/3.
EigScalingResult eigenvalue_scaling_study(const PainleveSolution& sol,
                                          const std::vector<double>& t_list, int ell,
                                          ModeSign sign, std::size_t n = 400);

struct GreenScalingResult {
    std::vector<double> t_list;
    std::vector<double> rho_nodes;
    std::vector<std::vector<double>> v_curves;  ///< t^{4/3} |xi_t| against rho
    std::vector<double> residual_norms;         ///< ||xi_t - t^{-4/3} u_ref||_{L^2}
    double max_pairwise_sup = 0.0;              ///< collapse distance / peak
    double residual_slope = 0.0;
};

/// Green solves against the fixed rho-profile source family: the rescaled
/// solutions t^{4/3} xi_t collapse onto one curve in rho, and the residual
/// after removing the extrapolated limit decays in t.
GreenScalingResult green_scaling_study(const PainleveSolution& sol,
                                       const std::vector<double>& t_list, int ell,
                                       std::size_t n = 500);

struct SubharmonicReport {
    double fraction_ok = 0.0;
    std::size_t nodes_checked = 0;
    double max_violation = 0.0;  ///< worst (rhs - lhs), normalized by local scale
    double max_inner = 0.0;      ///< max of u on the inner subdisk
    double max_ring = 0.0;       ///< max of u on the boundary ring
    bool max_principle_ok = false;
};

/// Pointwise differential inequality for u = (|mu|^2 + (3/4)|sigma|^2)/2 on
/// the annulus r_check_min <= r <= r_check_max (assumed source-free):
///   Laplacian u >= (1/7)|del* mu|^2 + |delbar* mu|^2 + |delbar* sigma|^2
///                + (7/2) t^2 |[Phi ^ *mu]|^2 + (3/32) t^2 |[Phi* ^ *sigma]|^2,
/// plus the interior maximum principle against the ring [r_ring_lo, r_check_max].
SubharmonicReport check_subharmonic(const OperatorContext& ctx, const FieldPair& musigma,
                                    double r_check_min, double r_check_max, double r_ring_lo,
                                    std::size_t n_theta = 64);

}  // namespace hbm
