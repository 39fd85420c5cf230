#include "hbm/ops.hpp"

namespace hbm {

OperatorContext make_context(const FiducialData& fd) {
    OperatorContext ctx;
    ctx.fd = &fd;
    auto pair = fiducial_fields(fd);
    ctx.A = std::move(pair.first);
    ctx.Phi = std::move(pair.second);
    ctx.t = fd.t;
    return ctx;
}

Field cov_d(const OperatorContext& ctx, const Field& F) {
    Field out = add(exterior_d(F), bracket(ctx.A, F));
    merge_terms(out);
    return out;
}

Field cov_d_star(const OperatorContext& ctx, const Field& F) {
    return scale(star(cov_d(ctx, star(F))), -1.0);
}

Field cov_delbar(const OperatorContext& ctx, const Field& F) {
    Field out = add(delbar(F), bracket(component(ctx.A, FormType::Dzbar), F));
    merge_terms(out);
    return out;
}

Field cov_del(const OperatorContext& ctx, const Field& F) {
    Field out = add(del(F), bracket(component(ctx.A, FormType::Dz), F));
    merge_terms(out);
    return out;
}

Field cov_delbar_star(const OperatorContext& ctx, const Field& F) {
    return scale(star(cov_del(ctx, star(F))), -1.0);
}

FieldPair infinitesimal_action(const OperatorContext& ctx, const Field& gamma) {
    return {cov_d(ctx, gamma), scale(bracket(ctx.Phi, gamma), ctx.t)};
}

Field infinitesimal_action_adjoint(const OperatorContext& ctx, const Field& alpha,
                                   const Field& phi) {
    Field out = cov_d_star(ctx, alpha);
    out = add(out, scale(star(bracket(ctx.Phi, adjoint(phi))), cplx(0.0, 0.5 * ctx.t)));
    out = add(out, scale(star(bracket(adjoint(ctx.Phi), phi)), cplx(0.0, -0.5 * ctx.t)));
    merge_terms(out);
    return out;
}

FieldPair linearized_op(const OperatorContext& ctx, const Field& adot, const Field& phidot) {
    Field mu = cov_d(ctx, adot);
    mu = add(mu, scale(bracket(ctx.Phi, adjoint(phidot)), ctx.t));
    mu = add(mu, scale(bracket(adjoint(ctx.Phi), phidot), ctx.t));
    merge_terms(mu);
    Field sigma = cov_delbar(ctx, phidot);
    sigma = add(sigma, scale(bracket(ctx.Phi, component(adot, FormType::Dzbar)), ctx.t));
    merge_terms(sigma);
    return {std::move(mu), std::move(sigma)};
}

FieldPair linearized_op_adjoint(const OperatorContext& ctx, const Field& mu, const Field& sigma) {
    Field a = cov_d_star(ctx, mu);
    a = add(a, scale(bracket(adjoint(ctx.Phi), star(sigma)), cplx(0.0, 0.5 * ctx.t)));
    a = add(a, scale(bracket(ctx.Phi, star(adjoint(sigma))), cplx(0.0, -0.5 * ctx.t)));
    merge_terms(a);
    Field p = cov_delbar_star(ctx, sigma);
    p = add(p, scale(bracket(ctx.Phi, star(mu)), cplx(0.0, -2.0 * ctx.t)));
    merge_terms(p);
    return {std::move(a), std::move(p)};
}

Field deformation_laplacian0(const OperatorContext& ctx, const Field& gamma) {
    Field out = cov_d_star(ctx, cov_d(ctx, gamma));
    const double t2 = ctx.t * ctx.t;
    out = add(out, scale(star(bracket(ctx.Phi, bracket(adjoint(ctx.Phi), gamma))), t2));
    out = add(out, scale(star(bracket(adjoint(ctx.Phi), bracket(ctx.Phi, gamma))), -t2));
    merge_terms(out);
    return out;
}

FieldPair deformation_laplacian2(const OperatorContext& ctx, const Field& mu, const Field& sigma) {
    auto ls = linearized_op_adjoint(ctx, mu, sigma);
    return linearized_op(ctx, ls.first, ls.second);
}

Field p_star(const FieldPair& v, const FieldPair& w) {
    const Field& alpha = v.first;
    const Field& phi = v.second;
    const Field& beta = w.first;
    const Field& psi = w.second;
    Field out = star(bracket(star(alpha), beta));
    out = add(out, scale(star(bracket(phi, adjoint(psi))), cplx(0.0, 0.5)));
    out = add(out, scale(star(bracket(adjoint(phi), psi)), cplx(0.0, -0.5)));
    merge_terms(out);
    return out;
}

FieldPair q_form(const FieldPair& v, const FieldPair& w) {
    const Field& alpha = v.first;
    const Field& phi = v.second;
    const Field& beta = w.first;
    const Field& psi = w.second;
    Field first = bracket(alpha, beta);
    first = add(first, bracket(phi, adjoint(psi)));
    first = add(first, bracket(adjoint(phi), psi));
    merge_terms(first);
    Field second = bracket(component(alpha, FormType::Dzbar), psi);
    second = add(second, bracket(component(beta, FormType::Dzbar), phi));
    merge_terms(second);
    return {std::move(first), std::move(second)};
}

}  // namespace hbm
