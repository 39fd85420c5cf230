#pragma once

#include <utility>
#include <vector>

#include "hbm/field.hpp"
#include "hbm/grid.hpp"
#include "hbm/painleve.hpp"

namespace hbm {

/// Radial data of the model solution at scale t on the disk with q = -z dz^2:
/// h(r) = psi((8/3) t r^{3/2}) and f(r) = 1/8 + (1/4) r h'(r), with their
/// derivatives.  f' is evaluated in closed form from the ODE,
/// f' = 2 t^2 r^2 sinh(2h), which the radial ODE implies exactly.
struct FiducialData {
    double t = 1.0;
    RadialGrid grid;
    std::vector<double> h;
    std::vector<double> h_prime;
    std::vector<double> f;
    std::vector<double> f_prime;
};

/// Samples h, h', f, f' on the given grid.  Requires t >= 1.  Radii with
/// rho = (8/3) t r^{3/2} outside the stored range use the solver's series /
/// envelope continuations.
FiducialData build_fiducial(const PainleveSolution& sol, double t, const RadialGrid& grid);

/// Measured constants for one t of the h/f property suite.
struct FiducialSweepRow {
    double t = 0.0;
    double f_min = 0.0;
    double f_max = 0.0;
    double sup_dist_to_eighth = 0.0;  ///< sup_{[r0, r_max]} |f - 1/8|
    double sup_f_over_r_t23 = 0.0;    ///< sup r^{-1} f / t^{2/3}
    double sup_f_over_r2_t43 = 0.0;   ///< sup r^{-2} f / t^{4/3}
    double envelope_const = 0.0;      ///< sup_{r >= r0} h (t r^{3/2})^{1/2} e^{(8/3) t r^{3/2}}
    double b0_fit = 0.0;              ///< fitted constant in h ~ -(1/2) log r + b0 near r = 0
    double sup_sqrtr_exp_ph = 0.0;    ///< sup r^{1/2} e^{+h}
    double sup_sqrtr_exp_mh = 0.0;    ///< sup r^{1/2} e^{-h}
    bool f_in_range = false;          ///< 0 <= f <= 1/8 at every node
    bool f_nondecreasing = false;
    bool h_positive_decreasing = false;
};

struct FiducialSweep {
    std::vector<FiducialSweepRow> rows;
    bool f_monotone_in_t = false;  ///< f_t nondecreasing pointwise as t increases
};

/// Property suite over a sweep of t values (increasing, nonempty) on a shared
/// grid; r0 sets the "away from the zero" region for the envelope and
/// sup-distance measurements.
FiducialSweep check_fiducial_sweep(const PainleveSolution& sol, const std::vector<double>& t_sweep,
                                   const RadialGrid& grid, double r0 = 0.25);

/// The model pair (connection form, Higgs field) as equivariant fields on
/// fd.grid (the returned fields reference fd.grid; fd must outlive them):
///   Phi = r^{1/2} [[0, e^{-h} e^{i theta}], [e^{h}, 0]] dz,
///   A   = -2 f dtheta diag(i, -i),
/// so that det Phi = -z dz^2 exactly.  The Higgs field is returned without
/// the factor t.
std::pair<Field, Field> fiducial_fields(const FiducialData& fd);

}  // namespace hbm
