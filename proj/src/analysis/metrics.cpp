#include "qtime/metrics.hpp"

#include "qtime/errors.hpp"

namespace qtime {

EvaluationReport evaluate(const std::vector<std::pair<double, double>>& pairs, TargetSpace space) {
    if (pairs.size() < 2) throw ContractError("evaluate: need at least 2 prediction pairs");

    double mean = 0;
    for (const auto& [y, yhat] : pairs) {
        (void)yhat;
        mean += y;
    }
    mean /= static_cast<double>(pairs.size());

    double sse = 0, sst = 0;
    for (const auto& [y, yhat] : pairs) {
        sse += (y - yhat) * (y - yhat);
        sst += (y - mean) * (y - mean);
    }
    if (sst == 0)
        throw ContractError("evaluate: zero variance in actuals; R^2 and NMSE are undefined");

    EvaluationReport r;
    r.n = pairs.size();
    r.space = space;
    r.mse = sse / static_cast<double>(pairs.size());
    r.nmse = sse / sst;
    r.r_squared = 1.0 - sse / sst;
    return r;
}

}  // namespace qtime
