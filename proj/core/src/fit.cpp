#include "hbm/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace hbm {

LineFit linfit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("linfit: need matching lists of size >= 2");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) throw std::invalid_argument("linfit: degenerate abscissae");
    LineFit f;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (y[i] == 0.0) continue;
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(std::abs(y[i])));
    }
    return linfit(lx, ly).slope;
}

double richardson_limit(const std::vector<double>& t, const std::vector<double>& y,
                        std::size_t n_use) {
    if (t.size() != y.size() || t.size() < 2)
        throw std::invalid_argument("richardson_limit: need matching lists of size >= 2");
    if (n_use < 2) n_use = 2;
    const std::size_t start = t.size() > n_use ? t.size() - n_use : 0;
    std::vector<double> s, v;
    for (std::size_t i = start; i < t.size(); ++i) {
        s.push_back(std::pow(t[i], -1.0 / 3.0));
        v.push_back(y[i]);
    }
    return linfit(s, v).intercept;
}

}  // namespace hbm
