#pragma once

#include <utility>

#include "hbm/fiducial.hpp"
#include "hbm/field.hpp"

namespace hbm {

using FieldPair = std::pair<Field, Field>;

/// The background data every covariant operator needs: the model pair on a
/// grid and the scale t.  Holds copies of the connection and Higgs fields,
/// which reference fd.grid — the FiducialData must outlive the context.
struct OperatorContext {
    const FiducialData* fd = nullptr;
    Field A;    ///< connection form (1-form, diagonal)
    Field Phi;  ///< Higgs field without the factor t ((1,0)-form)
    double t = 1.0;
};

OperatorContext make_context(const FiducialData& fd);

/// d_A F = dF + [A ^ F].
Field cov_d(const OperatorContext& ctx, const Field& F);

/// Formal adjoint d_A^* = -* d_A * on 1-forms and 2-forms.
Field cov_d_star(const OperatorContext& ctx, const Field& F);

/// delbar_A F = delbar F + [A^{0,1} ^ F]; del_A F = del F + [A^{1,0} ^ F].
Field cov_delbar(const OperatorContext& ctx, const Field& F);
Field cov_del(const OperatorContext& ctx, const Field& F);

/// Adjoint of delbar_A on 2-forms: delbar_A^* sigma = -* del_A * sigma.
Field cov_delbar_star(const OperatorContext& ctx, const Field& F);

/// Derivative of the gauge action at the model pair:
/// gamma |-> (d_A gamma, [t Phi ^ gamma]).
FieldPair infinitesimal_action(const OperatorContext& ctx, const Field& gamma);

/// Its formal adjoint on pairs (alpha, phi):
/// d_A^* alpha + (i/2) * [t Phi ^ phi*] - (i/2) * [t Phi* ^ phi].
Field infinitesimal_action_adjoint(const OperatorContext& ctx, const Field& alpha,
                                   const Field& phi);

/// Linearization of the self-duality equations at the model pair, acting on
/// normalized tangent data (adot, phidot):
///   (d_A adot + t[Phi ^ phidot*] + t[Phi* ^ phidot],
///    delbar_A phidot + t[Phi ^ adot^{0,1}]).
FieldPair linearized_op(const OperatorContext& ctx, const Field& adot, const Field& phidot);

/// Its formal adjoint on pairs of 2-forms (mu, sigma):
///   (d_A^* mu + (i/2) t [Phi* ^ *sigma] - (i/2) t [Phi ^ *sigma*],
///    delbar_A^* sigma - 2 i t [Phi ^ *mu]).
FieldPair linearized_op_adjoint(const OperatorContext& ctx, const Field& mu, const Field& sigma);

/// Degree-0 deformation Laplacian
///   d_A^* d_A gamma + t^2 * [Phi ^ [Phi* ^ gamma]] - t^2 * [Phi* ^ [Phi ^ gamma]].
Field deformation_laplacian0(const OperatorContext& ctx, const Field& gamma);

/// Degree-2 deformation Laplacian L L^* on pairs of 2-forms.
FieldPair deformation_laplacian2(const OperatorContext& ctx, const Field& mu, const Field& sigma);

/// Pointwise adjoint of the action derivative paired at two tangent vectors
/// v = (alpha, phi), w = (beta, psi):
///   * [* alpha ^ beta] + (i/2) * [phi ^ psi*] - (i/2) * [phi* ^ psi].
Field p_star(const FieldPair& v, const FieldPair& w);

/// Derivative of the hyperkaehler moment map paired at two tangent vectors:
///   ([alpha ^ beta] + [phi ^ psi*] + [phi* ^ psi],
///    [alpha^{0,1} ^ psi] + [beta^{0,1} ^ phi]).
FieldPair q_form(const FieldPair& v, const FieldPair& w);

}  // namespace hbm
