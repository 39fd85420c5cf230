#pragma once

#include <string>
#include <vector>

#include "hbm/field.hpp"
#include "hbm/ops.hpp"

namespace hbm {

enum class ModeSign { Plus, Minus };

/// One field term generated by a mode degree of freedom: the term's profile is
/// coeff * v (or coeff * conj(v) when conj is set), where v is the complex
/// value of the degree of freedom.  part selects the first or second member of
/// the field pair.
struct TermSpec {
    int part = 0;
    Slot slot = Slot::UL;
    int n = 0;
    cplx coeff{1.0, 0.0};
    bool conj = false;
};

/// A complex (or real) radial profile parametrizing part of a mode subspace.
struct DofSpec {
    std::string name;
    bool is_real = false;  ///< one real degree of freedom instead of two
    std::vector<TermSpec> terms;
};

/// Parametrization of one invariant angular subspace: a list of degrees of
/// freedom whose term sums span the subspace.  form is the common form factor
/// of every generated term (area forms for the degree-2 pairs, functions for
/// the gauge sector).
struct ModeParam {
    int ell = 0;
    ModeSign sign = ModeSign::Plus;
    FormType form = FormType::Area;
    int nparts = 2;
    std::vector<DofSpec> dofs;
    std::string label;

    int real_dim() const;
};

/// Angular subspace of pairs of 2-forms at angular index ell.  Sign Plus
/// (ell >= 0): diagonal hermitian mu at index +-ell together with
/// off-diagonal sigma profiles at indices (ell+2, -ell+2) upper-right and
/// (ell+1, -ell+1) lower-left; ten real degrees of freedom (five at ell = 0).
/// Sign Minus (ell >= 1): off-diagonal hermitian mu at indices (ell, -ell+1)
/// and diagonal sigma at indices (ell+1, -ell+2); eight real degrees of
/// freedom.
ModeParam make_pair_mode(int ell, ModeSign sign);

/// Gauge-sector (0-form, su(2)-valued) subspaces: the diagonal channel at
/// angular index n >= 0 and the off-diagonal channel coupling indices
/// {n, 1-n} for n >= 1.
ModeParam make_gauge_diag_mode(int n);
ModeParam make_gauge_offdiag_mode(int n);

std::vector<ModeParam> pair_modes_up_to(int ell_max);
std::vector<ModeParam> gauge_modes_up_to(int n_max);

/// Assemble the field pair generated by per-dof complex profiles (profiles
/// for real dofs are truncated to their real part).
FieldPair field_from_profiles(const ModeParam& mode, const RadialGrid& grid,
                              const std::vector<std::vector<cplx>>& profiles);

/// Recover per-dof profiles from a field pair by least squares over the
/// dof's term specs (exact when the field lies in the subspace).
std::vector<std::vector<cplx>> project_mode(const FieldPair& F, const ModeParam& mode);

/// L^2 weight of one real degree of freedom of the dof at a single node of
/// unit profile value: 2 pi * form weight * sum |coeff|^2.
double mode_mass_weight(const DofSpec& dof, FormType form);

/// Real packing of profiles, node-major: v[node * real_dim + k].  Complex
/// dofs occupy two consecutive real slots (Re, Im).
std::vector<double> pack_profiles(const ModeParam& mode,
                                  const std::vector<std::vector<cplx>>& profiles);
std::vector<std::vector<cplx>> unpack_profiles(const ModeParam& mode,
                                               const std::vector<double>& v,
                                               std::size_t n_nodes);

}  // namespace hbm
