#include "hbm/modes.hpp"

#include <cmath>
#include <stdexcept>

namespace hbm {

namespace {

const cplx kI{0.0, 1.0};

DofSpec complex_dof(std::string name, std::vector<TermSpec> terms) {
    DofSpec d;
    d.name = std::move(name);
    d.is_real = false;
    d.terms = std::move(terms);
    return d;
}

DofSpec real_dof(std::string name, std::vector<TermSpec> terms) {
    DofSpec d;
    d.name = std::move(name);
    d.is_real = true;
    d.terms = std::move(terms);
    return d;
}

}  // namespace

int ModeParam::real_dim() const {
    int d = 0;
    for (const auto& dof : dofs) d += dof.is_real ? 1 : 2;
    return d;
}

ModeParam make_pair_mode(int ell, ModeSign sign) {
    ModeParam m;
    m.ell = ell;
    m.sign = sign;
    m.form = FormType::Area;
    m.nparts = 2;
    if (sign == ModeSign::Plus) {
        if (ell < 0) throw std::invalid_argument("make_pair_mode: need ell >= 0 for sign +");
        m.label = "pair+" + std::to_string(ell);
        if (ell == 0) {
            m.dofs.push_back(real_dof("mu", {{0, Slot::UL, 0, 2.0, false},
                                             {0, Slot::LR, 0, -2.0, false}}));
            m.dofs.push_back(complex_dof("sigma", {{1, Slot::UR, 2, 1.0, false}}));
            m.dofs.push_back(complex_dof("tau", {{1, Slot::LL, 1, 1.0, false}}));
        } else {
            m.dofs.push_back(complex_dof("mu", {{0, Slot::UL, ell, 1.0, false},
                                                {0, Slot::UL, -ell, 1.0, true},
                                                {0, Slot::LR, ell, -1.0, false},
                                                {0, Slot::LR, -ell, -1.0, true}}));
            m.dofs.push_back(complex_dof("sigma_p", {{1, Slot::UR, ell + 2, 1.0, false}}));
            m.dofs.push_back(complex_dof("sigma_m", {{1, Slot::UR, -ell + 2, 1.0, false}}));
            m.dofs.push_back(complex_dof("tau_p", {{1, Slot::LL, ell + 1, 1.0, false}}));
            m.dofs.push_back(complex_dof("tau_m", {{1, Slot::LL, -ell + 1, 1.0, false}}));
        }
    } else {
        if (ell < 1) throw std::invalid_argument("make_pair_mode: need ell >= 1 for sign -");
        m.label = "pair-" + std::to_string(ell);
        m.dofs.push_back(complex_dof("mu_a", {{0, Slot::UR, ell, 1.0, false},
                                              {0, Slot::LL, -ell, 1.0, true}}));
        m.dofs.push_back(complex_dof("mu_b", {{0, Slot::UR, -ell + 1, 1.0, false},
                                              {0, Slot::LL, ell - 1, 1.0, true}}));
        m.dofs.push_back(complex_dof("sigma_a", {{1, Slot::UL, ell + 1, 1.0, false},
                                                 {1, Slot::LR, ell + 1, -1.0, false}}));
        m.dofs.push_back(complex_dof("sigma_b", {{1, Slot::UL, -ell + 2, 1.0, false},
                                                 {1, Slot::LR, -ell + 2, -1.0, false}}));
    }
    return m;
}

ModeParam make_gauge_diag_mode(int n) {
    if (n < 0) throw std::invalid_argument("make_gauge_diag_mode: need n >= 0");
    ModeParam m;
    m.ell = n;
    m.sign = ModeSign::Plus;
    m.form = FormType::Function;
    m.nparts = 1;
    m.label = "gauge-diag" + std::to_string(n);
    if (n == 0) {
        // gamma = i y diag(1,-1), y real.
        m.dofs.push_back(real_dof("g", {{0, Slot::UL, 0, kI, false},
                                        {0, Slot::LR, 0, -kI, false}}));
    } else {
        // UL = g e^{i n th} - conj(g) e^{-i n th} (purely imaginary pointwise).
        m.dofs.push_back(complex_dof("g", {{0, Slot::UL, n, 1.0, false},
                                           {0, Slot::UL, -n, -1.0, true},
                                           {0, Slot::LR, n, -1.0, false},
                                           {0, Slot::LR, -n, 1.0, true}}));
    }
    return m;
}

ModeParam make_gauge_offdiag_mode(int n) {
    if (n < 1) throw std::invalid_argument("make_gauge_offdiag_mode: need n >= 1");
    ModeParam m;
    m.ell = n;
    m.sign = ModeSign::Minus;
    m.form = FormType::Function;
    m.nparts = 1;
    m.label = "gauge-offdiag" + std::to_string(n);
    // Skew-hermitian off-diagonal part: LL = -conj(UR); the operator couples
    // the upper-right indices n and 1-n.
    m.dofs.push_back(complex_dof("u_p", {{0, Slot::UR, n, 1.0, false},
                                         {0, Slot::LL, -n, -1.0, true}}));
    m.dofs.push_back(complex_dof("u_m", {{0, Slot::UR, 1 - n, 1.0, false},
                                         {0, Slot::LL, n - 1, -1.0, true}}));
    return m;
}

std::vector<ModeParam> pair_modes_up_to(int ell_max) {
    std::vector<ModeParam> out;
    for (int ell = 0; ell <= ell_max; ++ell) out.push_back(make_pair_mode(ell, ModeSign::Plus));
    for (int ell = 1; ell <= ell_max; ++ell) out.push_back(make_pair_mode(ell, ModeSign::Minus));
    return out;
}

std::vector<ModeParam> gauge_modes_up_to(int n_max) {
    std::vector<ModeParam> out;
    for (int n = 0; n <= n_max; ++n) out.push_back(make_gauge_diag_mode(n));
    for (int n = 1; n <= n_max; ++n) out.push_back(make_gauge_offdiag_mode(n));
    return out;
}

FieldPair field_from_profiles(const ModeParam& mode, const RadialGrid& grid,
                              const std::vector<std::vector<cplx>>& profiles) {
    if (profiles.size() != mode.dofs.size())
        throw std::invalid_argument("field_from_profiles: profile count mismatch");
    FieldPair F{make_field(grid), make_field(grid)};
    const std::size_t n = grid.size();
    for (std::size_t d = 0; d < mode.dofs.size(); ++d) {
        const auto& dof = mode.dofs[d];
        std::vector<cplx> v = profiles[d];
        if (v.size() != n) throw std::invalid_argument("field_from_profiles: profile length");
        if (dof.is_real)
            for (auto& x : v) x = x.real();
        for (const auto& ts : dof.terms) {
            std::vector<cplx> g(n);
            for (std::size_t i = 0; i < n; ++i)
                g[i] = ts.coeff * (ts.conj ? std::conj(v[i]) : v[i]);
            Field& dst = ts.part == 0 ? F.first : F.second;
            add_term(dst, ts.slot, mode.form, ts.n, std::move(g));
        }
    }
    merge_terms(F.first);
    merge_terms(F.second);
    return F;
}

std::vector<std::vector<cplx>> project_mode(const FieldPair& F, const ModeParam& mode) {
    const RadialGrid* grid = F.first.grid ? F.first.grid : F.second.grid;
    if (!grid) throw std::invalid_argument("project_mode: fields have no grid");
    const std::size_t n = grid->size();
    std::vector<std::vector<cplx>> out(mode.dofs.size(), std::vector<cplx>(n, 0.0));
    for (std::size_t d = 0; d < mode.dofs.size(); ++d) {
        const auto& dof = mode.dofs[d];
        std::vector<cplx> acc(n, 0.0);
        double wsum = 0.0;
        for (const auto& ts : dof.terms) {
            const Field& src = ts.part == 0 ? F.first : F.second;
            for (const auto& term : src.terms) {
                if (term.slot != ts.slot || term.form != mode.form || term.n != ts.n) continue;
                const double w = std::norm(ts.coeff);
                for (std::size_t i = 0; i < n; ++i) {
                    cplx val = term.g[i] / ts.coeff;
                    if (ts.conj) val = std::conj(val);
                    acc[i] += w * val;
                }
            }
            wsum += std::norm(ts.coeff);
        }
        if (wsum > 0.0)
            for (std::size_t i = 0; i < n; ++i)
                out[d][i] = dof.is_real ? cplx(acc[i].real() / wsum, 0.0) : acc[i] / wsum;
    }
    return out;
}

double mode_mass_weight(const DofSpec& dof, FormType form) {
    double s = 0.0;
    for (const auto& ts : dof.terms) s += std::norm(ts.coeff);
    return 2.0 * M_PI * form_weight(form) * s;
}

std::vector<double> pack_profiles(const ModeParam& mode,
                                  const std::vector<std::vector<cplx>>& profiles) {
    const int dim = mode.real_dim();
    if (profiles.empty()) return {};
    const std::size_t n = profiles.front().size();
    std::vector<double> v(n * static_cast<std::size_t>(dim), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        int k = 0;
        for (std::size_t d = 0; d < mode.dofs.size(); ++d) {
            v[i * dim + k++] = profiles[d][i].real();
            if (!mode.dofs[d].is_real) v[i * dim + k++] = profiles[d][i].imag();
        }
    }
    return v;
}

std::vector<std::vector<cplx>> unpack_profiles(const ModeParam& mode, const std::vector<double>& v,
                                               std::size_t n_nodes) {
    const int dim = mode.real_dim();
    if (v.size() != n_nodes * static_cast<std::size_t>(dim))
        throw std::invalid_argument("unpack_profiles: size mismatch");
    std::vector<std::vector<cplx>> out(mode.dofs.size(), std::vector<cplx>(n_nodes, 0.0));
    for (std::size_t i = 0; i < n_nodes; ++i) {
        int k = 0;
        for (std::size_t d = 0; d < mode.dofs.size(); ++d) {
            double re = v[i * dim + k++];
            double im = 0.0;
            if (!mode.dofs[d].is_real) im = v[i * dim + k++];
            out[d][i] = cplx(re, im);
        }
    }
    return out;
}

}  // namespace hbm
