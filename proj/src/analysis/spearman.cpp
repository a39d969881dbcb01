#include "qtime/spearman.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qtime/errors.hpp"
#include "qtime/stats.hpp"

namespace qtime {

std::vector<double> average_ranks(const std::vector<double>& values) {
    const size_t n = values.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(n, 0.0);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ContractError("spearman: length mismatch");
    const size_t n = x.size();
    if (n < 3) throw ContractError("spearman: need at least 3 observations");

    auto rx = average_ranks(x);
    auto ry = average_ranks(y);

    double mean = (static_cast<double>(n) + 1.0) / 2.0;
    double sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        double dx = rx[i] - mean;
        double dy = ry[i] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0 || syy == 0)
        throw ContractError("spearman: constant input; rank correlation is undefined");

    SpearmanResult r;
    r.rho = sxy / std::sqrt(sxx * syy);
    if (r.rho >= 1.0 || r.rho <= -1.0) {
        r.rho = r.rho > 0 ? 1.0 : -1.0;
        r.p_value = 0.0;
        return r;
    }
    double df = static_cast<double>(n - 2);
    double t = r.rho * std::sqrt(df / (1.0 - r.rho * r.rho));
    r.p_value = student_t_two_sided_p(t, df);
    return r;
}

}  // namespace qtime
