#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acceptance.hpp"
#include "hbm/csv.hpp"
#include "hbm/curvature.hpp"
#include "hbm/parallel.hpp"

namespace {

using namespace hbm;

// "1,0,0" / "i" / "1+2i" / "0.5-1.5i" -> coefficient list.
std::vector<cplx> parse_complex_list(const std::string& text) {
    std::vector<cplx> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string tok = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        pos = comma == std::string::npos ? text.size() + 1 : comma + 1;
        while (!tok.empty() && (tok.front() == ' ')) tok.erase(tok.begin());
        while (!tok.empty() && (tok.back() == ' ')) tok.pop_back();
        if (tok.empty()) throw CLI::ValidationError("empty coefficient in '" + text + "'");
        double re = 0.0, im = 0.0;
        if (tok.back() == 'i' || tok.back() == 'I') {
            tok.pop_back();
            // Split a trailing imaginary part off an optional real part.
            std::size_t split = std::string::npos;
            for (std::size_t k = tok.size(); k-- > 1;) {
                if ((tok[k] == '+' || tok[k] == '-') && tok[k - 1] != 'e' && tok[k - 1] != 'E') {
                    split = k;
                    break;
                }
            }
            std::string im_str = split == std::string::npos ? tok : tok.substr(split);
            std::string re_str = split == std::string::npos ? "" : tok.substr(0, split);
            if (im_str.empty() || im_str == "+") im_str = "1";
            if (im_str == "-") im_str = "-1";
            try {
                im = std::stod(im_str);
                re = re_str.empty() ? 0.0 : std::stod(re_str);
            } catch (const std::exception&) {
                throw CLI::ValidationError("bad coefficient '" + tok + "i'");
            }
        } else {
            try {
                re = std::stod(tok);
            } catch (const std::exception&) {
                throw CLI::ValidationError("bad coefficient '" + tok + "'");
            }
        }
        out.push_back(cplx(re, im));
    }
    if (out.empty()) throw CLI::ValidationError("empty coefficient list");
    return out;
}

const char* slot_name(Slot s) {
    switch (s) {
        case Slot::UL: return "UL";
        case Slot::UR: return "UR";
        case Slot::LL: return "LL";
        case Slot::LR: return "LR";
    }
    return "?";
}

const char* form_name(FormType f) {
    switch (f) {
        case FormType::Function: return "function";
        case FormType::Dz: return "dz";
        case FormType::Dzbar: return "dzbar";
        case FormType::Area: return "area";
    }
    return "?";
}

void append_field_rows(std::vector<std::vector<std::string>>& rows, const char* label,
                       const Field& F) {
    for (const FieldTerm& term : F.terms)
        for (std::size_t i = 0; i < term.g.size(); ++i)
            rows.push_back({label, slot_name(term.slot), form_name(term.form),
                            std::to_string(term.n), csv_number(F.grid->nodes[i]),
                            csv_number(term.g[i].real()), csv_number(term.g[i].imag())});
}

int run_painleve_solve(double rho_min, double rho_max, std::size_t n, double tol,
                       const std::string& out) {
    PainleveSolution sol = solve_painleve(rho_min, rho_max, n, tol);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < sol.rho_grid.size(); ++i)
        rows.push_back({csv_number(sol.rho_grid.nodes[i]), csv_number(sol.psi[i]),
                        csv_number(sol.psi_prime[i]), csv_number(bessel_k0(sol.rho_grid.nodes[i]))});
    write_csv_file(out, {"rho", "psi", "psi_prime", "k0"}, rows);
    return 0;
}

int run_fiducial_check(const std::vector<double>& t_list, std::size_t n, const std::string& out) {
    PainleveSolution sol = solve_painleve(1e-4, 12.0, 3200, 1e-10);
    FiducialSweep sweep = check_fiducial_sweep(sol, t_list, make_log_grid(1e-3, 1.0, n));
    std::vector<std::vector<std::string>> rows;
    for (const FiducialSweepRow& r : sweep.rows) {
        const std::string t = csv_number(r.t);
        auto push = [&](const char* clause, double v) {
            rows.push_back({t, clause, csv_number(v)});
        };
        push("f_min", r.f_min);
        push("f_max", r.f_max);
        push("f_in_range", r.f_in_range ? 1.0 : 0.0);
        push("f_nondecreasing", r.f_nondecreasing ? 1.0 : 0.0);
        push("h_positive_decreasing", r.h_positive_decreasing ? 1.0 : 0.0);
        push("sup_dist_to_eighth", r.sup_dist_to_eighth);
        push("sup_f_over_r_t23", r.sup_f_over_r_t23);
        push("sup_f_over_r2_t43", r.sup_f_over_r2_t43);
        push("envelope_const", r.envelope_const);
        push("b0_fit", r.b0_fit);
        push("sup_sqrtr_exp_ph", r.sup_sqrtr_exp_ph);
        push("sup_sqrtr_exp_mh", r.sup_sqrtr_exp_mh);
    }
    rows.push_back({"all", "f_monotone_in_t", csv_number(sweep.f_monotone_in_t ? 1.0 : 0.0)});
    write_csv_file(out, {"t", "clause", "value"}, rows);
    return 0;
}

int run_tangent_build(const std::string& fdot, double t, std::size_t n, const std::string& out) {
    HolQuadDiff f;
    f.coeffs = parse_complex_list(fdot);
    PainleveSolution sol = solve_painleve(1e-4, 12.0, 3200, 1e-10);
    FiducialData fd = build_fiducial(sol, t, make_log_grid(1e-3, 1.0, n));
    OperatorContext ctx = make_context(fd);
    TangentVector X = corrected_tangent(ctx, f);
    std::vector<std::vector<std::string>> rows;
    append_field_rows(rows, "alpha", X.alpha);
    append_field_rows(rows, "phi", X.phi);
    write_csv_file(out, {"field", "slot", "form", "n", "r", "re", "im"}, rows);
    return 0;
}

int run_mode_spectrum(double t, int ell_max, std::size_t n, const std::string& out) {
    PainleveSolution sol = solve_painleve(1e-4, 12.0, 3200, 1e-10);
    FiducialData fd = build_fiducial(sol, t, make_log_grid(1e-3, 1.0, n));
    std::vector<ModeParam> modes = pair_modes_up_to(ell_max);
    std::vector<double> lambdas(modes.size(), 0.0);
    parallel_for(modes.size(), [&](std::size_t i) {
        OperatorContext ctx = make_context(fd);
        ModeBlockOp block = assemble_pair_block(ctx, modes[i], 2, 2);
        lambdas[i] = smallest_eigenvalue(block);
    });
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < modes.size(); ++i)
        rows.push_back({csv_number(t), std::to_string(modes[i].ell),
                        modes[i].sign == ModeSign::Plus ? "+" : "-", csv_number(lambdas[i])});
    write_csv_file(out, {"t", "ell", "sign", "lambda_min"}, rows);
    return 0;
}

int run_decay_rates(int ell_max, std::size_t n, const std::string& out) {
    struct Job {
        int ell;
        DecayBranch branch;
        DecaySubspace subspace;
    };
    std::vector<Job> jobs;
    for (int ell = 0; ell <= ell_max; ++ell)
        jobs.push_back({ell, DecayBranch::SigmaPlus, DecaySubspace::Parallel});
    for (int ell = 1; ell <= ell_max; ++ell)
        jobs.push_back({ell, DecayBranch::SigmaMinus, DecaySubspace::Parallel});
    for (int ell = 1; ell <= ell_max; ++ell)
        jobs.push_back({ell, DecayBranch::SigmaPlus, DecaySubspace::Perpendicular});
    std::vector<DecayRateResult> results(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t i) {
        results[i] = homogeneous_decay_rate(jobs[i].ell, jobs[i].branch, jobs[i].subspace, n);
    });
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < jobs.size(); ++i)
        rows.push_back({std::to_string(jobs[i].ell),
                        jobs[i].branch == DecayBranch::SigmaPlus ? "sigma_plus" : "sigma_minus",
                        jobs[i].subspace == DecaySubspace::Parallel ? "parallel" : "perpendicular",
                        csv_number(results[i].slope), csv_number(results[i].rate_rho)});
    write_csv_file(out, {"ell", "branch", "subspace", "slope", "rate_rho"}, rows);
    return 0;
}

int run_green_scaling(const std::vector<double>& t_list, int ell, std::size_t n,
                      const std::string& out) {
    PainleveSolution sol = solve_painleve(1e-4, 12.0, 3200, 1e-10);
    GreenScalingResult r = green_scaling_study(sol, t_list, ell, n);
    std::vector<std::string> header = {"rho"};
    for (double t : r.t_list) header.push_back("v_t" + csv_number(t));
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < r.rho_nodes.size(); ++i) {
        std::vector<std::string> row = {csv_number(r.rho_nodes[i])};
        for (const auto& curve : r.v_curves) row.push_back(csv_number(curve[i]));
        rows.push_back(std::move(row));
    }
    write_csv_file(out, header, rows);
    std::fprintf(stderr, "collapse (max pairwise sup / peak) = %.6g\nresidual slope = %.6g\n",
                 r.max_pairwise_sup, r.residual_slope);
    return 0;
}

int run_curvature_scan(const std::string& f1s, const std::string& f2s,
                       const std::vector<double>& t_list, int ell_max, std::size_t n,
                       const std::string& out, bool lambda_only) {
    HolQuadDiff f1, f2;
    f1.coeffs = parse_complex_list(f1s);
    f2.coeffs = parse_complex_list(f2s);
    PainleveSolution sol = solve_painleve(1e-4, 12.0, 3200, 1e-10);
    CurvatureConfig cfg;
    cfg.ell_max = ell_max;
    cfg.n = n;
    LambdaEstimate est = scan_and_fit(sol, f1, f2, t_list, cfg);
    if (lambda_only) {
        std::printf("slope = %.17g\nlambda = %.17g\n", est.slope, est.lambda);
        if (est.sign_change) std::printf("warning: K changed sign across the sweep\n");
        return 0;
    }
    std::vector<std::vector<std::string>> rows;
    for (const CurvaturePoint& p : est.points)
        rows.push_back({csv_number(p.t), csv_number(p.term_oneill), csv_number(p.term_gauss_1),
                        csv_number(p.term_gauss_2), csv_number(p.gram), csv_number(p.K),
                        csv_number(std::pow(p.t, 4.0 / 3.0) * p.K)});
    write_csv_file(out, {"t", "term_oneill", "term_gauss_1", "term_gauss_2", "gram", "K", "t43K"},
                   rows);
    std::fprintf(stderr, "slope = %.6g, lambda = %.6g%s\n", est.slope, est.lambda,
                 est.sign_change ? " (sign change!)" : "");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical toolkit for the large-scale geometry of the rank-2 model disk"};
    app.require_subcommand(1);

    std::string out;
    double rho_min = 1e-4, rho_max = 12.0, tol = 1e-10;
    std::size_t n_pain = 3200;
    auto* cmd_pain = app.add_subcommand("painleve-solve", "Solve the radial sinh-Gordon ODE");
    cmd_pain->add_option("--rho-min", rho_min);
    cmd_pain->add_option("--rho-max", rho_max);
    cmd_pain->add_option("--n", n_pain);
    cmd_pain->add_option("--tol", tol);
    cmd_pain->add_option("--out", out);

    std::vector<double> t_list = {1, 2, 4, 8, 16, 32};
    std::size_t n_fid = 600;
    auto* cmd_fid = app.add_subcommand("fiducial-check", "Property sweep of the model profiles");
    cmd_fid->add_option("--t-list", t_list)->delimiter(',');
    cmd_fid->add_option("--n", n_fid);
    cmd_fid->add_option("--out", out);

    std::string fdot = "1";
    double t_tan = 16.0;
    std::size_t n_tan = 300;
    auto* cmd_tan = app.add_subcommand("tangent-build", "Gauge-corrected tangent frame");
    cmd_tan->add_option("--fdot", fdot, "complex coefficients, e.g. \"1,0,0\" or \"1+2i\"");
    cmd_tan->add_option("--t", t_tan);
    cmd_tan->add_option("--n", n_tan);
    cmd_tan->add_option("--out", out);

    double t_spec = 4.0;
    int ell_max = 8;
    std::size_t n_spec = 400;
    auto* cmd_spec = app.add_subcommand("mode-spectrum", "Smallest block eigenvalues");
    cmd_spec->add_option("--t", t_spec);
    cmd_spec->add_option("--ell-max", ell_max);
    cmd_spec->add_option("--n", n_spec);
    cmd_spec->add_option("--out", out);

    int ell_max_decay = 6;
    std::size_t n_decay = 800;
    auto* cmd_decay = app.add_subcommand("decay-rates", "Homogeneous-solution decay rates");
    cmd_decay->add_option("--ell-max", ell_max_decay);
    cmd_decay->add_option("--n", n_decay);
    cmd_decay->add_option("--out", out);

    std::vector<double> t_green = {4, 8, 16, 32};
    int ell_green = 1;
    std::size_t n_green = 500;
    auto* cmd_green = app.add_subcommand("green-scaling", "Rescaled Green-solution collapse");
    cmd_green->add_option("--t-list", t_green)->delimiter(',');
    cmd_green->add_option("--ell", ell_green);
    cmd_green->add_option("--n", n_green);
    cmd_green->add_option("--out", out);

    std::string f1s = "1", f2s = "i";
    std::vector<double> t_curv = {8, 16, 32, 64};
    int ell_max_curv = 8;
    std::size_t n_curv = 300;
    auto* cmd_curv = app.add_subcommand("curvature-scan", "Sectional-curvature sweep");
    cmd_curv->add_option("--f1", f1s);
    cmd_curv->add_option("--f2", f2s);
    cmd_curv->add_option("--t-list", t_curv)->delimiter(',');
    cmd_curv->add_option("--ell-max", ell_max_curv);
    cmd_curv->add_option("--n", n_curv);
    cmd_curv->add_option("--out", out);

    auto* cmd_lambda = app.add_subcommand("lambda", "Fitted decay slope and limit coefficient");
    cmd_lambda->add_option("--f1", f1s);
    cmd_lambda->add_option("--f2", f2s);
    cmd_lambda->add_option("--t-list", t_curv)->delimiter(',');
    cmd_lambda->add_option("--ell-max", ell_max_curv);
    cmd_lambda->add_option("--n", n_curv);

    auto* cmd_self = app.add_subcommand("selftest", "Reduced-resolution verification suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_pain->parsed()) return run_painleve_solve(rho_min, rho_max, n_pain, tol, out);
        if (cmd_fid->parsed()) return run_fiducial_check(t_list, n_fid, out);
        if (cmd_tan->parsed()) return run_tangent_build(fdot, t_tan, n_tan, out);
        if (cmd_spec->parsed()) return run_mode_spectrum(t_spec, ell_max, n_spec, out);
        if (cmd_decay->parsed()) return run_decay_rates(ell_max_decay, n_decay, out);
        if (cmd_green->parsed()) return run_green_scaling(t_green, ell_green, n_green, out);
        if (cmd_curv->parsed())
            return run_curvature_scan(f1s, f2s, t_curv, ell_max_curv, n_curv, out, false);
        if (cmd_lambda->parsed())
            return run_curvature_scan(f1s, f2s, t_curv, ell_max_curv, n_curv, "", true);
        if (cmd_self->parsed()) {
            auto results = hbm::acceptance::run_suite({.reduced = true});
            return hbm::acceptance::print_report(results) ? 0 : 3;
        }
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
