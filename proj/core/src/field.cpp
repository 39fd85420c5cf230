#include "hbm/field.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace hbm {

int form_degree(FormType f) {
    switch (f) {
        case FormType::Function: return 0;
        case FormType::Dz:
        case FormType::Dzbar: return 1;
        case FormType::Area: return 2;
    }
    return 0;
}

double form_weight(FormType f) {
    switch (f) {
        case FormType::Function: return 1.0;
        case FormType::Dz:
        case FormType::Dzbar: return 2.0;
        case FormType::Area: return 4.0;
    }
    return 1.0;
}

namespace {

void require_same_grid(const Field& F, const Field& G) {
    if (F.grid != G.grid) throw std::invalid_argument("fields live on different grids");
}

// Matrix product of slot basis elements: E_a E_b = coeff * E_c or zero.
bool slot_product(Slot a, Slot b, Slot* out) {
    switch (a) {
        case Slot::UL:
            if (b == Slot::UL) { *out = Slot::UL; return true; }
            if (b == Slot::UR) { *out = Slot::UR; return true; }
            return false;
        case Slot::UR:
            if (b == Slot::LL) { *out = Slot::UL; return true; }
            if (b == Slot::LR) { *out = Slot::UR; return true; }
            return false;
        case Slot::LL:
            if (b == Slot::UL) { *out = Slot::LL; return true; }
            if (b == Slot::UR) { *out = Slot::LR; return true; }
            return false;
        case Slot::LR:
            if (b == Slot::LL) { *out = Slot::LL; return true; }
            if (b == Slot::LR) { *out = Slot::LR; return true; }
            return false;
    }
    return false;
}

// Wedge of form factors: returns false if the product vanishes, otherwise the
// resulting form and a scalar factor (dzbar ^ dz = -dz ^ dzbar).
bool form_wedge(FormType a, FormType b, FormType* out, double* sign) {
    *sign = 1.0;
    if (a == FormType::Function) { *out = b; return true; }
    if (b == FormType::Function) { *out = a; return true; }
    if (a == FormType::Dz && b == FormType::Dzbar) { *out = FormType::Area; return true; }
    if (a == FormType::Dzbar && b == FormType::Dz) {
        *out = FormType::Area;
        *sign = -1.0;
        return true;
    }
    return false;
}

Slot slot_adjoint(Slot s) {
    switch (s) {
        case Slot::UL: return Slot::UL;
        case Slot::UR: return Slot::LL;
        case Slot::LL: return Slot::UR;
        case Slot::LR: return Slot::LR;
    }
    return s;
}

}  // namespace

Field make_field(const RadialGrid& grid) {
    Field F;
    F.grid = &grid;
    return F;
}

void add_term(Field& F, Slot slot, FormType form, int n, std::vector<cplx> g) {
    if (!F.grid) throw std::invalid_argument("add_term: field has no grid");
    if (g.size() != F.grid->size()) throw std::invalid_argument("add_term: profile length mismatch");
    F.terms.push_back(FieldTerm{slot, form, n, std::move(g)});
}

Field add(const Field& F, const Field& G) {
    require_same_grid(F, G);
    Field out = F;
    out.terms.insert(out.terms.end(), G.terms.begin(), G.terms.end());
    return out;
}

Field scale(const Field& F, cplx c) {
    Field out = F;
    for (auto& t : out.terms)
        for (auto& v : t.g) v *= c;
    return out;
}

Field adjoint(const Field& F) {
    Field out = make_field(*F.grid);
    for (const auto& t : F.terms) {
        FieldTerm a;
        a.slot = slot_adjoint(t.slot);
        a.n = -t.n;
        a.g.resize(t.g.size());
        for (std::size_t i = 0; i < t.g.size(); ++i) a.g[i] = std::conj(t.g[i]);
        switch (t.form) {
            case FormType::Function: a.form = FormType::Function; break;
            case FormType::Dz: a.form = FormType::Dzbar; break;
            case FormType::Dzbar: a.form = FormType::Dz; break;
            case FormType::Area:
                // conj(dz ^ dzbar) = dzbar ^ dz = -(dz ^ dzbar)
                a.form = FormType::Area;
                for (auto& v : a.g) v = -v;
                break;
        }
        out.terms.push_back(std::move(a));
    }
    return out;
}

Field star(const Field& F) {
    Field out = make_field(*F.grid);
    for (const auto& t : F.terms) {
        FieldTerm s = t;
        cplx c;
        switch (t.form) {
            case FormType::Function:
                s.form = FormType::Area;
                c = cplx(0.0, 0.5);
                break;
            case FormType::Dz: c = cplx(0.0, -1.0); break;
            case FormType::Dzbar: c = cplx(0.0, 1.0); break;
            case FormType::Area:
                s.form = FormType::Function;
                c = cplx(0.0, -2.0);
                break;
        }
        for (auto& v : s.g) v *= c;
        out.terms.push_back(std::move(s));
    }
    return out;
}

Field wedge(const Field& F, const Field& G) {
    require_same_grid(F, G);
    Field out = make_field(*F.grid);
    for (const auto& a : F.terms) {
        for (const auto& b : G.terms) {
            Slot s;
            FormType f;
            double sign;
            if (!slot_product(a.slot, b.slot, &s)) continue;
            if (!form_wedge(a.form, b.form, &f, &sign)) continue;
            FieldTerm t;
            t.slot = s;
            t.form = f;
            t.n = a.n + b.n;
            t.g.resize(a.g.size());
            for (std::size_t i = 0; i < a.g.size(); ++i) t.g[i] = sign * a.g[i] * b.g[i];
            out.terms.push_back(std::move(t));
        }
    }
    merge_terms(out);
    return out;
}

Field bracket(const Field& F, const Field& G) {
    require_same_grid(F, G);
    Field out = make_field(*F.grid);
    auto accumulate = [&](const FieldTerm& a, const FieldTerm& b, double extra) {
        Slot s;
        FormType f;
        double sign;
        if (!slot_product(a.slot, b.slot, &s)) return;
        if (!form_wedge(a.form, b.form, &f, &sign)) return;
        FieldTerm t;
        t.slot = s;
        t.form = f;
        t.n = a.n + b.n;
        t.g.resize(a.g.size());
        const double c = sign * extra;
        for (std::size_t i = 0; i < a.g.size(); ++i) t.g[i] = c * a.g[i] * b.g[i];
        out.terms.push_back(std::move(t));
    };
    for (const auto& a : F.terms) {
        for (const auto& b : G.terms) {
            accumulate(a, b, 1.0);
            const int pq = form_degree(a.form) * form_degree(b.form);
            accumulate(b, a, (pq % 2 == 0) ? -1.0 : 1.0);
        }
    }
    merge_terms(out);
    return out;
}

namespace {

// d(g e^{i n theta}) = (1/2)(g' + n g/r) e^{i(n-1)theta} dz
//                    + (1/2)(g' - n g/r) e^{i(n+1)theta} dzbar.
enum class Dol { Del, Delbar };

Field dolbeault(const Field& F, Dol which) {
    Field out = make_field(*F.grid);
    const auto& r = F.grid->nodes;
    for (const auto& t : F.terms) {
        if (t.form == FormType::Area) continue;
        if (which == Dol::Del && t.form == FormType::Dz) continue;
        if (which == Dol::Delbar && t.form == FormType::Dzbar) continue;
        const auto dg = differentiate4(*F.grid, t.g);
        FieldTerm o;
        o.slot = t.slot;
        o.g.resize(t.g.size());
        if (which == Dol::Del) {
            o.n = t.n - 1;
            for (std::size_t i = 0; i < t.g.size(); ++i)
                o.g[i] = 0.5 * (dg[i] + static_cast<double>(t.n) * t.g[i] / r[i]);
            if (t.form == FormType::Function) {
                o.form = FormType::Dz;
            } else {  // Dzbar: dz ^ dzbar
                o.form = FormType::Area;
            }
        } else {
            o.n = t.n + 1;
            for (std::size_t i = 0; i < t.g.size(); ++i)
                o.g[i] = 0.5 * (dg[i] - static_cast<double>(t.n) * t.g[i] / r[i]);
            if (t.form == FormType::Function) {
                o.form = FormType::Dzbar;
            } else {  // Dz: dzbar ^ dz = -(dz ^ dzbar)
                o.form = FormType::Area;
                for (auto& v : o.g) v = -v;
            }
        }
        out.terms.push_back(std::move(o));
    }
    merge_terms(out);
    return out;
}

}  // namespace

Field del(const Field& F) { return dolbeault(F, Dol::Del); }
Field delbar(const Field& F) { return dolbeault(F, Dol::Delbar); }
Field exterior_d(const Field& F) { return add(del(F), delbar(F)); }

Field component(const Field& F, FormType form) {
    Field out = make_field(*F.grid);
    for (const auto& t : F.terms)
        if (t.form == form) out.terms.push_back(t);
    return out;
}

void merge_terms(Field& F) {
    std::map<std::tuple<int, int, int>, std::size_t> index;
    std::vector<FieldTerm> merged;
    for (auto& t : F.terms) {
        const auto key = std::make_tuple(static_cast<int>(t.slot), static_cast<int>(t.form), t.n);
        auto it = index.find(key);
        if (it == index.end()) {
            index.emplace(key, merged.size());
            merged.push_back(std::move(t));
        } else {
            auto& dst = merged[it->second].g;
            for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += t.g[i];
        }
    }
    std::vector<FieldTerm> kept;
    for (auto& t : merged) {
        bool zero = true;
        for (const auto& v : t.g)
            if (v != cplx(0.0, 0.0)) {
                zero = false;
                break;
            }
        if (!zero) kept.push_back(std::move(t));
    }
    F.terms = std::move(kept);
}

double inner(const Field& F, const Field& G) {
    require_same_grid(F, G);
    // Orthogonality in theta and between distinct form factors reduces the
    // integral to matched (slot, form, n) pairs; Tr(E_a E_b^*) = delta_{ab}.
    double s = 0.0;
    const auto& w = F.grid->weights;
    for (const auto& a : F.terms) {
        for (const auto& b : G.terms) {
            if (a.slot != b.slot || a.form != b.form || a.n != b.n) continue;
            double acc = 0.0;
            for (std::size_t i = 0; i < a.g.size(); ++i)
                acc += w[i] * (a.g[i].real() * b.g[i].real() + a.g[i].imag() * b.g[i].imag());
            s += 2.0 * M_PI * form_weight(a.form) * acc;
        }
    }
    return s;
}

double l2_norm(const Field& F) { return std::sqrt(std::max(0.0, inner(F, F))); }

double sup_norm(const Field& F) {
    if (!F.grid) return 0.0;
    const std::size_t n = F.grid->size();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (const auto& t : F.terms) s += std::sqrt(form_weight(t.form)) * std::abs(t.g[i]);
        worst = std::max(worst, s);
    }
    return worst;
}

}  // namespace hbm
