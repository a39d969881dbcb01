#include "qtime/budget.hpp"

#include <cmath>

#include "qtime/errors.hpp"
#include "qtime/stats.hpp"

namespace qtime {

long plan_budget(long population, double confidence_percent, double margin_percent) {
    if (population < 1) throw ContractError("plan_budget: population must be at least 1");
    if (!(margin_percent > 0)) throw ContractError("plan_budget: margin must be positive");
    if (!(confidence_percent > 0 && confidence_percent < 100))
        throw ContractError("plan_budget: confidence must lie in (0, 100)");

    const double alpha = 1.0 - confidence_percent / 100.0;
    const double z = normal_quantile(1.0 - alpha / 2.0);
    const double m = margin_percent / 100.0;
    const double n0 = z * z * 0.25 / (m * m);
    const double corrected = n0 / (1.0 + (n0 - 1.0) / static_cast<double>(population));
    long n = static_cast<long>(std::ceil(corrected));
    if (n < 1) n = 1;
    if (n > population) n = population;
    return n;
}

}  // namespace qtime
