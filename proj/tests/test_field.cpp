#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hbm/field.hpp"

using namespace hbm;

namespace {

std::vector<cplx> smooth_profile(const RadialGrid& g, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const double a = U(rng), b = U(rng), c = U(rng), d = U(rng);
    std::vector<cplx> p(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double s = std::log(g.nodes[i] / g.r_min) / std::log(g.r_max / g.r_min);
        const double w = s * s * (1.0 - s) * (1.0 - s);  // vanishes at both ends
        p[i] = w * cplx(a * std::sin(4 * s) + b, c * std::cos(3 * s) + d);
    }
    return p;
}

Field random_field(const RadialGrid& g, FormType form, unsigned seed) {
    Field F = make_field(g);
    int n = -2;
    for (Slot s : {Slot::UL, Slot::UR, Slot::LL, Slot::LR})
        add_term(F, s, form, n++, smooth_profile(g, seed += 17));
    return F;
}

double rel_l2_diff(const Field& A, const Field& B) {
    Field D = add(A, scale(B, -1.0));
    return l2_norm(D) / (l2_norm(A) + l2_norm(B) + 1e-300);
}

}  // namespace

TEST_CASE("form weights and degrees") {
    CHECK(form_degree(FormType::Function) == 0);
    CHECK(form_degree(FormType::Dz) == 1);
    CHECK(form_degree(FormType::Dzbar) == 1);
    CHECK(form_degree(FormType::Area) == 2);
    CHECK(form_weight(FormType::Function) == 1.0);
    CHECK(form_weight(FormType::Dz) == 2.0);
    CHECK(form_weight(FormType::Dzbar) == 2.0);
    CHECK(form_weight(FormType::Area) == 4.0);
}

TEST_CASE("Hodge star squares to the degree sign") {
    RadialGrid g = make_log_grid(1e-2, 1.0, 100);
    // ** = +1 on 0- and 2-forms, -1 on 1-forms for a 2-dimensional metric.
    for (FormType form : {FormType::Function, FormType::Area}) {
        Field F = random_field(g, form, 1);
        CHECK(rel_l2_diff(star(star(F)), F) < 1e-14);
    }
    for (FormType form : {FormType::Dz, FormType::Dzbar}) {
        Field F = random_field(g, form, 2);
        CHECK(rel_l2_diff(star(star(F)), scale(F, -1.0)) < 1e-14);
    }
}

TEST_CASE("adjoint is an involution and conjugate-linear") {
    RadialGrid g = make_log_grid(1e-2, 1.0, 100);
    for (FormType form : {FormType::Function, FormType::Dz, FormType::Area}) {
        Field F = random_field(g, form, 3);
        CHECK(rel_l2_diff(adjoint(adjoint(F)), F) < 1e-14);
        const cplx c(0.3, -1.7);
        CHECK(rel_l2_diff(adjoint(scale(F, c)), scale(adjoint(F), std::conj(c))) < 1e-14);
    }
}

TEST_CASE("inner product structure") {
    RadialGrid g = make_log_grid(1e-2, 1.0, 400);
    Field F = random_field(g, FormType::Dz, 4);
    Field G = random_field(g, FormType::Dz, 5);
    CHECK(inner(F, G) == doctest::Approx(inner(G, F)).epsilon(1e-12));
    CHECK(inner(F, F) > 0.0);
    CHECK(l2_norm(F) == doctest::Approx(std::sqrt(inner(F, F))).epsilon(1e-12));
    // Distinct angular indices are orthogonal.
    Field A = make_field(g), B = make_field(g);
    add_term(A, Slot::UL, FormType::Function, 2, smooth_profile(g, 77));
    add_term(B, Slot::UL, FormType::Function, 3, smooth_profile(g, 78));
    CHECK(std::abs(inner(A, B)) < 1e-14);
    // Distinct form factors are orthogonal.
    Field C = make_field(g);
    add_term(C, Slot::UL, FormType::Dz, 2, smooth_profile(g, 79));
    CHECK(std::abs(inner(A, C)) < 1e-14);
    // Unit check: |1 * E_UL|^2 = 2 pi int r dr.
    Field one = make_field(g);
    add_term(one, Slot::UL, FormType::Function, 0, std::vector<cplx>(g.size(), 1.0));
    const double area = 2.0 * M_PI * 0.5 * (g.r_max * g.r_max - g.r_min * g.r_min);
    CHECK(inner(one, one) == doctest::Approx(area).epsilon(1e-3));
}

TEST_CASE("graded bracket symmetries") {
    RadialGrid g = make_log_grid(1e-2, 1.0, 100);
    Field F = random_field(g, FormType::Function, 6);
    Field G = random_field(g, FormType::Function, 7);
    // Degree (0,0): [F ^ G] = -[G ^ F].
    CHECK(rel_l2_diff(bracket(F, G), scale(bracket(G, F), -1.0)) < 1e-13);
    // Degree (1,1): [a ^ b] = +[b ^ a].
    Field A = random_field(g, FormType::Dz, 8);
    Field B = random_field(g, FormType::Dzbar, 9);
    CHECK(rel_l2_diff(bracket(A, B), bracket(B, A)) < 1e-13);
    // [F ^ F] = 0 in degree 0.
    CHECK(l2_norm(bracket(F, F)) < 1e-13 * l2_norm(F));
}

TEST_CASE("wedge of dz with dzbar lands in area terms") {
    RadialGrid g = make_log_grid(1e-2, 1.0, 100);
    Field A = random_field(g, FormType::Dz, 10);
    Field B = random_field(g, FormType::Dzbar, 11);
    Field W = wedge(A, B);
    for (const FieldTerm& term : W.terms) CHECK(term.form == FormType::Area);
    // dz ^ dz = 0.
    Field A2 = random_field(g, FormType::Dz, 12);
    CHECK(l2_norm(wedge(A, A2)) < 1e-14);
}

TEST_CASE("exterior derivative splits as del + delbar") {
    RadialGrid g = make_log_grid(1e-2, 1.0, 300);
    Field F = random_field(g, FormType::Function, 13);
    Field D = exterior_d(F);
    Field S = add(del(F), delbar(F));
    CHECK(rel_l2_diff(D, S) < 1e-13);
    // del of a function has only dz terms.
    for (const FieldTerm& term : del(F).terms) CHECK(term.form == FormType::Dz);
    for (const FieldTerm& term : delbar(F).terms) CHECK(term.form == FormType::Dzbar);
}

TEST_CASE("component and merge") {
    RadialGrid g = make_log_grid(1e-2, 1.0, 50);
    Field F = make_field(g);
    add_term(F, Slot::UR, FormType::Dz, 1, smooth_profile(g, 20));
    add_term(F, Slot::UR, FormType::Dzbar, 1, smooth_profile(g, 21));
    add_term(F, Slot::UR, FormType::Dz, 1, smooth_profile(g, 22));
    Field C = component(F, FormType::Dz);
    CHECK(C.terms.size() == 2);
    merge_terms(C);
    CHECK(C.terms.size() == 1);
    Field Z = add(F, scale(F, -1.0));
    merge_terms(Z);
    CHECK(l2_norm(Z) < 1e-12);
}
