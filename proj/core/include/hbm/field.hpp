#pragma once

#include <vector>

#include "hbm/grid.hpp"

namespace hbm {

/// Matrix slot inside a 2x2 frame: E_UL = diag(1,0), E_UR = e_{12},
/// E_LL = e_{21}, E_LR = diag(0,1).
enum class Slot { UL, UR, LL, LR };

/// Form factor carried by a term: scalar, dz, dzbar, or dz ^ dzbar.
enum class FormType { Function, Dz, Dzbar, Area };

int form_degree(FormType f);

/// Pointwise metric weight of the form factor in <a,b> = Re Tr(a b*):
/// 1 for functions, 2 for dz or dzbar, 4 for dz ^ dzbar
/// (|dz|^2 = 2, |dz ^ dzbar|^2 = 4 in the flat metric).
double form_weight(FormType f);

/// One term of an equivariant field: (matrix slot) * g(r) e^{i n theta} * (form).
struct FieldTerm {
    Slot slot;
    FormType form;
    int n;
    std::vector<cplx> g;
};

/// Finite sum of equivariant terms over a shared radial grid.  Represents
/// endomorphism-valued functions and forms on the punctured disk: connections,
/// Higgs fields, tangent vectors, and the 2-form data of the mode spaces.
struct Field {
    const RadialGrid* grid = nullptr;
    std::vector<FieldTerm> terms;
};

Field make_field(const RadialGrid& grid);
void add_term(Field& F, Slot slot, FormType form, int n, std::vector<cplx> g);

Field add(const Field& F, const Field& G);
Field scale(const Field& F, cplx c);

/// Pointwise adjoint F |-> F^*: matrix conjugate transpose together with
/// complex conjugation of the form factor (dz <-> dzbar; dz ^ dzbar picks up
/// a sign).
Field adjoint(const Field& F);

/// Hodge star of the flat metric: *1 = (i/2) dz ^ dzbar, *dz = -i dz,
/// *dzbar = i dzbar, *(dz ^ dzbar) = -2i.
Field star(const Field& F);

/// Matrix-valued wedge product F ^ G (matrix product on slots, wedge on
/// forms).  Terms whose slot product or form wedge vanishes are dropped.
Field wedge(const Field& F, const Field& G);

/// Graded bracket [F ^ G] = F ^ G - (-1)^{pq} G ^ F, with p, q the form
/// degrees of the individual terms.
Field bracket(const Field& F, const Field& G);

/// Dolbeault operators of the trivialized disk.  del maps functions to dz
/// terms and dzbar terms to area terms; delbar maps functions to dzbar terms
/// and dz terms to area terms.  Radial derivatives use the fourth-order
/// stencil.
Field del(const Field& F);
Field delbar(const Field& F);

/// d = del + delbar.
Field exterior_d(const Field& F);

/// Keep only terms with the given form factor.
Field component(const Field& F, FormType form);

/// Combine terms with identical (slot, form, n) keys and drop exact zeros.
void merge_terms(Field& F);

/// L^2 inner product int <F, G> r dr dtheta with the pointwise real metric
/// Re Tr(F G*); distinct angular indices and distinct form factors are
/// orthogonal, so the integral reduces to matched-term radial quadratures.
double inner(const Field& F, const Field& G);

double l2_norm(const Field& F);

/// Max over nodes of the pointwise norm |F| = sqrt(<F,F>_pointwise), with the
/// theta-average replaced by the worst case (triangle inequality over terms).
double sup_norm(const Field& F);

}  // namespace hbm
