#include "hbm/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "hbm/fit.hpp"

namespace hbm {

namespace {

constexpr int kReach = 4;    // stencil reach of a first-order engine
constexpr int kSpacing = 9;  // comb spacing: > 2*kReach

struct ChannelKey {
    int part, slot, form, n;
    bool operator<(const ChannelKey& o) const {
        return std::tie(part, slot, form, n) < std::tie(o.part, o.slot, o.form, o.n);
    }
};

struct StencilEntry {
    int col;  // packed input index
    cplx val;
};

// One real degree of freedom of the mode parametrization.
struct RealDofRef {
    std::size_t dof;
    bool imag;
};

std::vector<RealDofRef> real_dof_list(const ModeParam& mode) {
    std::vector<RealDofRef> out;
    for (std::size_t d = 0; d < mode.dofs.size(); ++d) {
        out.push_back({d, false});
        if (!mode.dofs[d].is_real) out.push_back({d, true});
    }
    return out;
}

}  // namespace

ModeBlockOp assemble_block(const RadialGrid& grid, const ModeParam& mode, double t, int degree,
                           const PairEngine& engine, std::size_t dirichlet_left,
                           std::size_t dirichlet_right) {
    ModeBlockOp op;
    op.mode = mode;
    op.grid = &grid;
    op.t = t;
    op.degree = degree;
    op.dim = mode.real_dim();
    op.n = grid.size();
    const int dim = op.dim;
    const std::size_t n = op.n;
    const std::size_t total = n * static_cast<std::size_t>(dim);
    const auto rdofs = real_dof_list(mode);

    // Probe the engine on combs of nodal basis vectors; spacing kSpacing
    // separates the stencil footprints, so every (row, column) coefficient is
    // read off exactly.
    std::map<ChannelKey, std::size_t> channel_index;
    std::vector<FormType> channel_form;
    // stencils[channel][row i] -> entries
    std::vector<std::vector<std::vector<StencilEntry>>> stencils;

    std::vector<std::vector<cplx>> profiles(mode.dofs.size(), std::vector<cplx>(n, 0.0));
    for (std::size_t k = 0; k < rdofs.size(); ++k) {
        for (int s = 0; s < kSpacing; ++s) {
            for (auto& p : profiles)
                std::fill(p.begin(), p.end(), cplx(0.0, 0.0));
            auto& p = profiles[rdofs[k].dof];
            for (std::size_t j = s; j < n; j += kSpacing)
                p[j] = rdofs[k].imag ? cplx(0.0, 1.0) : cplx(1.0, 0.0);
            FieldPair probe = field_from_profiles(mode, grid, profiles);
            FieldPair out = engine(probe);
            for (int part = 0; part < 2; ++part) {
                const Field& f = part == 0 ? out.first : out.second;
                for (const auto& term : f.terms) {
                    ChannelKey key{part, static_cast<int>(term.slot), static_cast<int>(term.form),
                                   term.n};
                    auto it = channel_index.find(key);
                    if (it == channel_index.end()) {
                        it = channel_index.emplace(key, stencils.size()).first;
                        channel_form.push_back(term.form);
                        stencils.emplace_back(n);
                    }
                    auto& rows = stencils[it->second];
                    for (std::size_t i = 0; i < n; ++i) {
                        const cplx v = term.g[i];
                        if (v == cplx(0.0, 0.0)) continue;
                        // unique comb column within reach of row i
                        const long base = static_cast<long>(i) - s;
                        long m = (base + kSpacing / 2);
                        m = (m >= 0 ? m / kSpacing : -((-m + kSpacing - 1) / kSpacing));
                        const long j = s + m * kSpacing;
                        if (j < 0 || j >= static_cast<long>(n) ||
                            std::labs(j - static_cast<long>(i)) > kReach) {
                            if (std::abs(v) < 1e-13) continue;
                            throw std::logic_error("assemble_block: stencil reach exceeded");
                        }
                        rows[i].push_back(
                            {static_cast<int>(j) * dim + static_cast<int>(k), v});
                    }
                }
            }
        }
    }

    // Stiffness A = M^T W M, lower symmetric band.
    op.kd = (2 * kReach) * dim + (dim - 1);
    const int ld = op.kd + 1;
    op.a_band.assign(total * static_cast<std::size_t>(ld), 0.0);
    auto aref = [&](int row, int col) -> double& {
        // row >= col in lower band storage
        return op.a_band[static_cast<std::size_t>(col) * ld + (row - col)];
    };
    for (std::size_t c = 0; c < stencils.size(); ++c) {
        const double fw = 2.0 * M_PI * form_weight(channel_form[c]);
        for (std::size_t i = 0; i < n; ++i) {
            const double w = fw * grid.weights[i];
            const auto& row = stencils[c][i];
            for (std::size_t p = 0; p < row.size(); ++p) {
                for (std::size_t q = p; q < row.size(); ++q) {
                    const double v = w * (row[p].val.real() * row[q].val.real() +
                                          row[p].val.imag() * row[q].val.imag());
                    const int lo = std::min(row[p].col, row[q].col);
                    const int hi = std::max(row[p].col, row[q].col);
                    aref(hi, lo) += v;
                }
            }
        }
    }

    // Diagonal mass.
    op.bdiag.resize(total);
    for (std::size_t j = 0; j < n; ++j) {
        int k = 0;
        for (const auto& dof : mode.dofs) {
            const double mw = mode_mass_weight(dof, mode.form) * grid.weights[j];
            op.bdiag[j * dim + k++] = mw;
            if (!dof.is_real) op.bdiag[j * dim + k++] = mw;
        }
    }

    // Dirichlet masking: identity rows/columns in A, zeroed right-hand sides.
    op.masked.assign(total, false);
    auto mask_node = [&](std::size_t j) {
        for (int k = 0; k < dim; ++k) op.masked[j * dim + k] = true;
    };
    for (std::size_t j = 0; j < std::min(dirichlet_left, n); ++j) mask_node(j);
    for (std::size_t j = n - std::min(dirichlet_right, n); j < n; ++j) mask_node(j);
    if (dirichlet_left || dirichlet_right) {
        for (std::size_t col = 0; col < total; ++col) {
            for (int d = 0; d <= op.kd && col + d < total; ++d) {
                const std::size_t row = col + d;
                if (op.masked[col] || op.masked[row])
                    op.a_band[col * static_cast<std::size_t>(ld) + d] = (d == 0 ? 1.0 : 0.0);
            }
        }
    }
    return op;
}

ModeBlockOp assemble_pair_block(const OperatorContext& ctx, const ModeParam& mode,
                                std::size_t dirichlet_left, std::size_t dirichlet_right) {
    PairEngine engine = [&ctx](const FieldPair& F) {
        return linearized_op_adjoint(ctx, F.first, F.second);
    };
    return assemble_block(ctx.fd->grid, mode, ctx.t, 2, engine, dirichlet_left, dirichlet_right);
}

ModeBlockOp assemble_gauge_block(const OperatorContext& ctx, const ModeParam& mode) {
    PairEngine engine = [&ctx](const FieldPair& F) { return infinitesimal_action(ctx, F.first); };
    return assemble_block(ctx.fd->grid, mode, ctx.t, 0, engine);
}

namespace {

void factorize(ModeBlockOp& op) {
    if (op.factorized) return;
    const lapack_int nn = static_cast<lapack_int>(op.n * static_cast<std::size_t>(op.dim));
    op.chol_band = op.a_band;
    lapack_int info = LAPACKE_dpbtrf(LAPACK_COL_MAJOR, 'L', nn, op.kd, op.chol_band.data(),
                                     op.kd + 1);
    if (info > 0) {
        // Round-off can push a strictly positive operator marginally off SPD;
        // retry with a relative ridge.
        double amax = 0.0;
        for (std::size_t c = 0; c < static_cast<std::size_t>(nn); ++c)
            amax = std::max(amax, op.a_band[c * (op.kd + 1)]);
        op.chol_band = op.a_band;
        for (std::size_t c = 0; c < static_cast<std::size_t>(nn); ++c)
            op.chol_band[c * (op.kd + 1)] += 1e-12 * amax;
        info = LAPACKE_dpbtrf(LAPACK_COL_MAJOR, 'L', nn, op.kd, op.chol_band.data(), op.kd + 1);
    }
    if (info != 0) throw std::runtime_error("block factorization failed");
    op.factorized = true;
}

}  // namespace

std::vector<double> block_solve(ModeBlockOp& op, std::vector<double> rhs) {
    factorize(op);
    const lapack_int nn = static_cast<lapack_int>(rhs.size());
    for (std::size_t i = 0; i < rhs.size(); ++i)
        if (op.masked[i]) rhs[i] = 0.0;
    lapack_int info = LAPACKE_dpbtrs(LAPACK_COL_MAJOR, 'L', nn, op.kd, 1, op.chol_band.data(),
                                     op.kd + 1, rhs.data(), nn);
    if (info != 0) throw std::runtime_error("block solve failed");
    for (std::size_t i = 0; i < rhs.size(); ++i)
        if (op.masked[i]) rhs[i] = 0.0;
    return rhs;
}

std::vector<double> block_apply_stiffness(const ModeBlockOp& op, const std::vector<double>& x) {
    const std::size_t total = x.size();
    const int ld = op.kd + 1;
    std::vector<double> y(total, 0.0);
    for (std::size_t col = 0; col < total; ++col) {
        const double xc = x[col];
        y[col] += op.a_band[col * static_cast<std::size_t>(ld)] * xc;
        const std::size_t hi = std::min(total - 1, col + static_cast<std::size_t>(op.kd));
        for (std::size_t row = col + 1; row <= hi; ++row) {
            const double a = op.a_band[col * static_cast<std::size_t>(ld) + (row - col)];
            y[row] += a * xc;
            y[col] += a * x[row];
        }
    }
    return y;
}

double smallest_eigenvalue(ModeBlockOp& op, int max_iter, double tol) {
    const std::size_t total = op.n * static_cast<std::size_t>(op.dim);
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> x(total);
    for (auto& v : x) v = dist(rng);
    for (std::size_t i = 0; i < total; ++i)
        if (op.masked[i]) x[i] = 0.0;
    double lambda = 0.0, prev = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        std::vector<double> y(total);
        for (std::size_t i = 0; i < total; ++i) y[i] = op.bdiag[i] * x[i];
        x = block_solve(op, std::move(y));
        double nb = 0.0;
        for (std::size_t i = 0; i < total; ++i) nb += op.bdiag[i] * x[i] * x[i];
        nb = std::sqrt(nb);
        if (nb == 0.0) throw std::runtime_error("smallest_eigenvalue: null iterate");
        for (auto& v : x) v /= nb;
        const auto ax = block_apply_stiffness(op, x);
        double num = 0.0;
        for (std::size_t i = 0; i < total; ++i) num += x[i] * ax[i];
        lambda = num;  // x is B-normalized
        if (it > 2 && std::abs(lambda - prev) <= tol * std::abs(lambda)) break;
        prev = lambda;
    }
    return lambda;
}

std::vector<double> rhs_from_field(const ModeBlockOp& op, const FieldPair& eta) {
    auto profiles = project_mode(eta, op.mode);
    auto v = pack_profiles(op.mode, profiles);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = op.masked[i] ? 0.0 : v[i] * op.bdiag[i];
    return v;
}

std::vector<double> green_solve(ModeBlockOp& op, const FieldPair& eta) {
    return block_solve(op, rhs_from_field(op, eta));
}

double green_pairing(ModeBlockOp& op, const FieldPair& eta, const FieldPair& zeta) {
    const auto x = block_solve(op, rhs_from_field(op, eta));
    const auto r = rhs_from_field(op, zeta);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += r[i] * x[i];
    return s;
}

FieldPair field_from_packed(const ModeBlockOp& op, const std::vector<double>& x) {
    auto profiles = unpack_profiles(op.mode, x, op.n);
    return field_from_profiles(op.mode, *op.grid, profiles);
}

std::vector<std::vector<cplx>> apply_pair_plus_explicit(
    const FiducialData& fd, int ell, const std::vector<std::vector<cplx>>& comp) {
    if (ell < 1) throw std::invalid_argument("apply_pair_plus_explicit: need ell >= 1");
    if (comp.size() != 5)
        throw std::invalid_argument("apply_pair_plus_explicit: need 5 components");
    const RadialGrid& g = fd.grid;
    const std::size_t n = g.size();
    const double t = fd.t, t2 = t * t;
    auto rdr2 = [&](const std::vector<cplx>& p) {
        auto d1 = differentiate4(g, p);
        std::vector<cplx> rd(n);
        for (std::size_t i = 0; i < n; ++i) rd[i] = g.nodes[i] * d1[i];
        auto d2 = differentiate4(g, rd);
        for (std::size_t i = 0; i < n; ++i) rd[i] = g.nodes[i] * d2[i];
        return rd;
    };
    const auto& mu = comp[0];
    const auto& sp = comp[1];
    const auto& sm = comp[2];
    const auto& tp = comp[3];
    const auto& tm = comp[4];
    auto dmu = differentiate4(g, mu);
    auto dsp = differentiate4(g, sp);
    auto dsm = differentiate4(g, sm);
    auto dtp = differentiate4(g, tp);
    auto dtm = differentiate4(g, tm);
    auto k_mu = rdr2(mu);
    auto k_sp = rdr2(sp);
    auto k_sm = rdr2(sm);
    auto k_tp = rdr2(tp);
    auto k_tm = rdr2(tm);
    std::vector<std::vector<cplx>> out(5, std::vector<cplx>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        const double r = g.nodes[i], r2 = r * r, r3 = r2 * r;
        const double h = fd.h[i], f = fd.f[i], fp = fd.f_prime[i];
        const double eh = std::exp(h), emh = std::exp(-h);
        const double pref = 0.5 * t * std::sqrt(r);
        // The couplings of the mu row to the (-ell+2)/(-ell+1) components are
        // conjugated, mirroring the conjugate mu in the last two rows; the
        // last row carries e^{+h} like its tau partner.  Both facts are fixed
        // by the self-adjointness of the operator and verified against the
        // composed form in the tests.
        out[0][i] =
            -0.5 / r2 * (2.0 * k_mu[i]) +
            0.5 / r2 *
                (2.0 * ell * ell * mu[i] + 64.0 * t2 * r3 * std::cosh(2.0 * h) * mu[i]) +
            pref * (emh * (dsp[i] + (ell + 2.0) / r * sp[i] - 4.0 * f / r * sp[i] +
                           std::conj(dsm[i] + (-ell + 2.0) / r * sm[i] -
                                     4.0 * f / r * sm[i])) -
                    eh * (dtp[i] + (ell + 1.0) / r * tp[i] + 4.0 * f / r * tp[i] +
                          std::conj(dtm[i] + (-ell + 1.0) / r * tm[i] +
                                    4.0 * f / r * tm[i])));
        const double ap = ell + 2.0 - 4.0 * f, am = -ell + 2.0 - 4.0 * f;
        const double bp = ell + 1.0 + 4.0 * f, bm = -ell + 1.0 + 4.0 * f;
        out[1][i] = -0.5 / r2 * k_sp[i] +
                    0.5 / r2 *
                        (ap * ap * sp[i] + 4.0 * r * fp * sp[i] +
                         4.0 * t2 * r3 * emh * emh * sp[i] - 4.0 * t2 * r3 * tp[i]) -
                    pref * 4.0 * emh * (dmu[i] - static_cast<double>(ell) / r * mu[i]);
        out[2][i] = -0.5 / r2 * k_sm[i] +
                    0.5 / r2 *
                        (am * am * sm[i] + 4.0 * r * fp * sm[i] +
                         4.0 * t2 * r3 * emh * emh * sm[i] - 4.0 * t2 * r3 * tm[i]) -
                    pref * 4.0 * emh *
                        (std::conj(dmu[i]) + static_cast<double>(ell) / r * std::conj(mu[i]));
        out[3][i] = -0.5 / r2 * k_tp[i] +
                    0.5 / r2 *
                        (bp * bp * tp[i] - 4.0 * r * fp * tp[i] - 4.0 * t2 * r3 * sp[i] +
                         4.0 * t2 * r3 * eh * eh * tp[i]) +
                    pref * 4.0 * eh * (dmu[i] - static_cast<double>(ell) / r * mu[i]);
        out[4][i] = -0.5 / r2 * k_tm[i] +
                    0.5 / r2 *
                        (bm * bm * tm[i] - 4.0 * r * fp * tm[i] - 4.0 * t2 * r3 * sm[i] +
                         4.0 * t2 * r3 * eh * eh * tm[i]) +
                    pref * 4.0 * eh *
                        (std::conj(dmu[i]) + static_cast<double>(ell) / r * std::conj(mu[i]));
    }
    return out;
}

FiducialData make_limiting_fiducial(double t, const RadialGrid& grid) {
    FiducialData fd;
    fd.t = t;
    fd.grid = grid;
    fd.h.assign(grid.size(), 0.0);
    fd.h_prime.assign(grid.size(), 0.0);
    fd.f.assign(grid.size(), 0.125);
    fd.f_prime.assign(grid.size(), 0.0);
    return fd;
}

DecayRateResult homogeneous_decay_rate(int ell, DecayBranch branch, DecaySubspace subspace,
                                       std::size_t n) {
    DecayRateResult res;
    res.ell = ell;
    res.subspace = subspace;
    res.branch = branch;
    const bool perp = subspace == DecaySubspace::Perpendicular;
    const double r_lo = perp ? 1e-3 : 1e-5;
    const double r_hi = perp ? 0.6 : 1.0;
    const double t = perp ? 16.0 : 1.0;
    RadialGrid grid = make_log_grid(r_lo, r_hi, n);
    FiducialData fd = make_limiting_fiducial(t, grid);
    OperatorContext ctx = make_context(fd);
    ModeParam mode = make_pair_mode(ell, ModeSign::Plus);
    // A Dirichlet outer edge keeps the power-law measurements on the decaying
    // branch; the variational boundary condition alone would select the
    // kernel branch of the first-order factor, which can be the growing one.
    ModeBlockOp block = assemble_pair_block(ctx, mode, 0, perp ? 0 : 2);

    // Source in the chosen branch near the inner edge; outward of it the
    // solution follows the decaying homogeneous branch.
    const double src_lo = 1.2 * r_lo, src_hi = 2.0 * r_lo;
    std::vector<std::vector<cplx>> profiles(mode.dofs.size(),
                                            std::vector<cplx>(grid.size(), 0.0));
    auto dof_index = [&](const std::string& name) -> std::size_t {
        for (std::size_t d = 0; d < mode.dofs.size(); ++d)
            if (mode.dofs[d].name == name) return d;
        throw std::logic_error("missing dof " + name);
    };
    std::size_t d_sig, d_tau;
    if (ell == 0) {
        if (branch == DecayBranch::SigmaMinus)
            throw std::invalid_argument("homogeneous_decay_rate: sigma_minus needs ell >= 1");
        d_sig = dof_index("sigma");
        d_tau = dof_index("tau");
    } else if (branch == DecayBranch::SigmaPlus) {
        d_sig = dof_index("sigma_p");
        d_tau = dof_index("tau_p");
    } else {
        d_sig = dof_index("sigma_m");
        d_tau = dof_index("tau_m");
    }
    // SigmaMinus: source the sigma profile alone; its partner decays with a
    // different exponent and sourcing both contaminates the fit window.
    const bool source_tau = perp || branch == DecayBranch::SigmaPlus;
    const double tau_sign = perp ? -1.0 : 1.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        if (grid.nodes[j] >= src_lo && grid.nodes[j] <= src_hi) {
            profiles[d_sig][j] = 1.0;
            if (source_tau) profiles[d_tau][j] = tau_sign;
        }
    }
    FieldPair src = field_from_profiles(mode, grid, profiles);
    const auto x = green_solve(block, src);
    const auto sol = unpack_profiles(mode, x, grid.size());

    if (perp) {
        std::vector<double> xs, ys;
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double rho = (8.0 / 3.0) * t * std::pow(grid.nodes[j], 1.5);
            if (rho < 6.0 || rho > 13.0) continue;
            const double u = 0.5 * std::abs(sol[d_sig][j] - sol[d_tau][j]);
            if (u <= 0.0) continue;
            xs.push_back(rho);
            ys.push_back(std::log(u));
        }
        res.rate_rho = linfit(xs, ys).slope;
        return res;
    }

    // Tail values sit many orders below the source peak, where the banded
    // solve leaves a two-node sawtooth; a 1-2-1 average annihilates that
    // parasitic mode while leaving the smooth profile essentially unchanged.
    std::vector<double> v(grid.size(), 0.0);
    for (std::size_t j = 1; j + 1 < grid.size(); ++j)
        v[j] = std::abs(0.25 * (sol[d_sig][j - 1] + 2.0 * sol[d_sig][j] + sol[d_sig][j + 1]));

    // When the sourced branch is the fastest-decaying one in its channel
    // (sigma_minus with ell >= 3), the profile picks up a slower-decaying
    // admixture whose relative weight grows linearly in r.  Measure the
    // running log-slope just outside the source and extrapolate it to r = 0;
    // that removes the first-order contamination.  The slow branches are
    // measured with a plain log-log fit far from the source, where their own
    // power law dominates.
    const bool fast_branch = branch == DecayBranch::SigmaMinus && ell >= 3;
    const double win_lo = fast_branch ? 2.5e-5 : 1e-4;
    const double win_hi = fast_branch ? 2.5e-4 : 2e-3;
    std::vector<double> xs, ys;
    for (std::size_t j = 1; j + 1 < grid.size(); ++j) {
        const double r = grid.nodes[j];
        if (r < win_lo || r > win_hi) continue;
        if (v[j - 1] <= 0.0 || v[j] <= 0.0 || v[j + 1] <= 0.0) continue;
        if (fast_branch) {
            const double s = (std::log(v[j + 1]) - std::log(v[j - 1])) /
                             (std::log(grid.nodes[j + 1]) - std::log(grid.nodes[j - 1]));
            xs.push_back(r);
            ys.push_back(s);
        } else {
            xs.push_back(std::log(r));
            ys.push_back(std::log(v[j]));
        }
    }
    const LineFit f = linfit(xs, ys);
    res.slope = fast_branch ? f.intercept : f.slope;
    return res;
}

EigScalingResult eigenvalue_scaling_study(const PainleveSolution& sol,
                                          const std::vector<double>& t_list, int ell,
                                          ModeSign sign, std::size_t n) {
    EigScalingResult out;
    out.t_list = t_list;
    for (double t : t_list) {
        const double r_hi = std::pow(t, -2.0 / 3.0);
        const double r_lo = std::pow(3.0 * 1e-3 / (8.0 * t), 2.0 / 3.0);
        RadialGrid grid = make_log_grid(r_lo, r_hi, n);
        FiducialData fd = build_fiducial(sol, t, grid);
        OperatorContext ctx = make_context(fd);
        // Dirichlet rows at both truncation edges: the inner ones stand in for
        // regularity at the puncture, the outer ones for the disk boundary;
        // without them the variational kernel branch sits at eigenvalue zero.
        ModeBlockOp block = assemble_pair_block(ctx, make_pair_mode(ell, sign), 2, 2);
        out.lambda.push_back(smallest_eigenvalue(block));
    }
    out.fitted_exponent = loglog_slope(out.t_list, out.lambda);
    return out;
}

GreenScalingResult green_scaling_study(const PainleveSolution& sol,
                                       const std::vector<double>& t_list, int ell,
                                       std::size_t n) {
    if (t_list.size() < 3)
        throw std::invalid_argument("green_scaling_study: need at least 3 t values");
    GreenScalingResult out;
    out.t_list = t_list;
    // The fiducial coefficients are exact functions of rho, so at fixed rho
    // the only t-dependence of the rescaled solution comes from the disk
    // boundary r = 1 sitting at rho = 8t/3.  All grids share the same
    // log-spaced rho nodes starting at rho0; each t keeps the nodes up to its
    // own boundary, so curves subtract node-by-node without interpolation.
    const double rho0 = 0.05;
    const double t_max = *std::max_element(t_list.begin(), t_list.end());
    const double delta = std::log(8.0 * t_max / (3.0 * rho0)) / static_cast<double>(n - 1);
    out.rho_nodes.resize(n);
    for (std::size_t j = 0; j < n; ++j)
        out.rho_nodes[j] = rho0 * std::exp(delta * static_cast<double>(j));

    ModeParam mode = make_pair_mode(ell, ModeSign::Plus);
    const int dim = mode.real_dim();
    std::vector<std::vector<double>> packed_sols;
    std::vector<std::vector<double>> bdiags;
    std::vector<std::size_t> n_nodes;
    for (double t : t_list) {
        const double rho_b = 8.0 * t / 3.0;
        std::size_t nt = 0;
        while (nt < n && out.rho_nodes[nt] <= rho_b * (1.0 + 1e-12)) ++nt;
        const double r_lo = std::pow(3.0 * out.rho_nodes[0] / (8.0 * t), 2.0 / 3.0);
        const double r_hi = std::pow(3.0 * out.rho_nodes[nt - 1] / (8.0 * t), 2.0 / 3.0);
        RadialGrid grid = make_log_grid(r_lo, r_hi, nt);
        FiducialData fd = build_fiducial(sol, t, grid);
        OperatorContext ctx = make_context(fd);
        ModeBlockOp block = assemble_pair_block(ctx, mode, 2, 2);

        std::vector<std::vector<cplx>> profiles(mode.dofs.size(),
                                                std::vector<cplx>(nt, 0.0));
        std::size_t d_sig = 0;
        for (std::size_t d = 0; d < mode.dofs.size(); ++d)
            if (mode.dofs[d].name == (ell == 0 ? "sigma" : "sigma_p")) d_sig = d;
        for (std::size_t j = 0; j < nt; ++j) {
            const double rho = out.rho_nodes[j];
            profiles[d_sig][j] = std::exp(-2.0 * (rho - 1.5) * (rho - 1.5));
        }
        FieldPair src = field_from_profiles(mode, grid, profiles);
        auto x = green_solve(block, src);
        packed_sols.push_back(x);
        bdiags.push_back(block.bdiag);
        n_nodes.push_back(nt);

        std::vector<double> curve(nt, 0.0);
        const double s = std::pow(t, 4.0 / 3.0);
        for (std::size_t j = 0; j < nt; ++j) {
            double acc = 0.0;
            for (int k = 0; k < dim; ++k) acc += x[j * dim + k] * x[j * dim + k];
            curve[j] = s * std::sqrt(acc);
        }
        out.v_curves.push_back(std::move(curve));
    }

    // Collapse distance relative to the common peak.  The collapsed profile
    // is an interior object: it is compared on a fixed core window in rho,
    // while the effect of each curve's own moving boundary is what the
    // remainder norms below quantify.
    const double rho_core = 8.0;
    std::size_t n_core = 0;
    while (n_core < n && out.rho_nodes[n_core] <= rho_core) ++n_core;
    double peak = 0.0;
    for (const auto& c : out.v_curves)
        for (double v : c) peak = std::max(peak, v);
    for (std::size_t a = 0; a < out.v_curves.size(); ++a)
        for (std::size_t b = a + 1; b < out.v_curves.size(); ++b) {
            // Dirichlet rows at each boundary hold the last two nodes at
            // zero, so exclude them from the shared window.
            const std::size_t nc = std::min(
                {n_core, out.v_curves[a].size() - 2, out.v_curves[b].size() - 2});
            double d = 0.0;
            for (std::size_t j = 0; j < nc; ++j)
                d = std::max(d, std::abs(out.v_curves[a][j] - out.v_curves[b][j]));
            out.max_pairwise_sup = std::max(out.max_pairwise_sup, d / peak);
        }

    // Remainder after subtracting the collapsed profile (taken from the
    // largest t, whose boundary sits deepest in the exponential tail),
    // measured in the disk L^2 norm of each t's own grid.
    const std::size_t m = t_list.size();
    std::size_t i_ref = 0;
    for (std::size_t a = 1; a < m; ++a)
        if (t_list[a] > t_list[i_ref]) i_ref = a;
    const double c_ref = std::pow(t_list[i_ref], 4.0 / 3.0);
    std::vector<double> fit_t, fit_r;
    for (std::size_t a = 0; a < m; ++a) {
        if (a == i_ref) continue;
        const double c = std::pow(t_list[a], -4.0 / 3.0);
        const std::size_t nc = std::min(n_nodes[a], n_nodes[i_ref]) - 2;
        double acc = 0.0;
        for (std::size_t j = 0; j < nc; ++j)
            for (int k = 0; k < dim; ++k) {
                const std::size_t ia = j * dim + k;
                const double d = packed_sols[a][ia] -
                                 c * c_ref * packed_sols[i_ref][ia];
                acc += bdiags[a][ia] * d * d;
            }
        fit_t.push_back(t_list[a]);
        fit_r.push_back(std::sqrt(acc));
    }
    out.residual_norms = fit_r;
    out.residual_slope = loglog_slope(fit_t, fit_r);
    return out;
}

namespace {

double pointwise_norm2(const Field& F, std::size_t i, double theta) {
    cplx m[4][4] = {};
    for (const auto& term : F.terms)
        m[static_cast<int>(term.form)][static_cast<int>(term.slot)] +=
            term.g[i] * std::polar(1.0, term.n * theta);
    double s = 0.0;
    for (int f = 0; f < 4; ++f) {
        double acc = 0.0;
        for (int sl = 0; sl < 4; ++sl) acc += std::norm(m[f][sl]);
        s += form_weight(static_cast<FormType>(f)) * acc;
    }
    return s;
}

}  // namespace

SubharmonicReport check_subharmonic(const OperatorContext& ctx, const FieldPair& musigma,
                                    double r_check_min, double r_check_max, double r_ring_lo,
                                    std::size_t n_theta) {
    const RadialGrid& grid = ctx.fd->grid;
    const std::size_t n = grid.size();
    const Field& mu = musigma.first;
    const Field& sigma = musigma.second;

    const Field del_star_mu = scale(star(cov_delbar(ctx, star(mu))), -1.0);
    const Field delbar_star_mu = cov_delbar_star(ctx, mu);
    const Field delbar_star_sigma = cov_delbar_star(ctx, sigma);
    const Field br_mu = bracket(ctx.Phi, star(mu));
    const Field br_sigma = bracket(adjoint(ctx.Phi), star(sigma));
    const double t2 = ctx.t * ctx.t;

    // Sample u on the polar grid, Laplacian per angular index.
    std::vector<std::vector<double>> u(n, std::vector<double>(n_theta));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n_theta; ++j) {
            const double th = 2.0 * M_PI * static_cast<double>(j) / n_theta;
            u[i][j] = 0.5 * (pointwise_norm2(mu, i, th) + 0.75 * pointwise_norm2(sigma, i, th));
        }
    std::vector<std::vector<double>> lap(n, std::vector<double>(n_theta, 0.0));
    for (std::size_t mi = 0; mi < n_theta; ++mi) {
        const int mm = static_cast<int>(mi) <= static_cast<int>(n_theta) / 2
                           ? static_cast<int>(mi)
                           : static_cast<int>(mi) - static_cast<int>(n_theta);
        std::vector<cplx> um(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            cplx acc = 0.0;
            for (std::size_t j = 0; j < n_theta; ++j)
                acc += u[i][j] * std::polar(1.0, -mm * 2.0 * M_PI * static_cast<double>(j) /
                                                     n_theta);
            um[i] = acc / static_cast<double>(n_theta);
        }
        auto d1 = differentiate4(grid, um);
        std::vector<cplx> xd(n);
        for (std::size_t i = 0; i < n; ++i) xd[i] = grid.nodes[i] * d1[i];
        auto d2 = differentiate4(grid, xd);
        for (std::size_t i = 0; i < n; ++i) {
            const cplx lm = (grid.nodes[i] * d2[i] - static_cast<double>(mm * mm) * um[i]) /
                            (grid.nodes[i] * grid.nodes[i]);
            for (std::size_t j = 0; j < n_theta; ++j)
                lap[i][j] += (lm * std::polar(1.0, mm * 2.0 * M_PI * static_cast<double>(j) /
                                                       n_theta))
                                 .real();
        }
    }

    SubharmonicReport rep;
    double lhs_scale = 0.0;
    for (std::size_t i = 2; i + 2 < n; ++i)
        for (std::size_t j = 0; j < n_theta; ++j)
            if (grid.nodes[i] >= r_check_min && grid.nodes[i] <= r_check_max)
                lhs_scale = std::max(lhs_scale, std::abs(lap[i][j]));
    std::size_t ok = 0;
    for (std::size_t i = 2; i + 2 < n; ++i) {
        const double r = grid.nodes[i];
        if (r < r_check_min || r > r_check_max) continue;
        for (std::size_t j = 0; j < n_theta; ++j) {
            const double th = 2.0 * M_PI * static_cast<double>(j) / n_theta;
            // The sigma-divergence coefficient is 1, not 3/2: collecting the
            // energy estimate's terms gives 3/2 - 1/2 on that square, and the
            // inequality with 3/2 genuinely fails at near-equality points.
            const double rhs = pointwise_norm2(del_star_mu, i, th) / 7.0 +
                               pointwise_norm2(delbar_star_mu, i, th) +
                               pointwise_norm2(delbar_star_sigma, i, th) +
                               3.5 * t2 * pointwise_norm2(br_mu, i, th) +
                               (3.0 / 32.0) * t2 * pointwise_norm2(br_sigma, i, th);
            const double lhs = lap[i][j];
            ++rep.nodes_checked;
            const double slack = 1e-7 * (std::abs(lhs) + rhs) + 1e-12 * lhs_scale;
            if (lhs >= rhs - slack)
                ++ok;
            else
                rep.max_violation =
                    std::max(rep.max_violation, (rhs - lhs) / (std::abs(lhs) + rhs + 1e-300));
        }
        for (std::size_t j = 0; j < n_theta; ++j) {
            if (r < r_ring_lo)
                rep.max_inner = std::max(rep.max_inner, u[i][j]);
            else
                rep.max_ring = std::max(rep.max_ring, u[i][j]);
        }
    }
    rep.fraction_ok = rep.nodes_checked
                          ? static_cast<double>(ok) / static_cast<double>(rep.nodes_checked)
                          : 1.0;
    rep.max_principle_ok = rep.max_inner <= rep.max_ring * (1.0 + 1e-8);
    return rep;
}

}  // namespace hbm
