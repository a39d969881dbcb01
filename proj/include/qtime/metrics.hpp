#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "qtime/model.hpp"

namespace qtime {

/// R^2, MSE and NMSE over one prediction set, all sharing the same target
/// mean so that r_squared + nmse == 1 holds as an identity.
struct EvaluationReport {
    double mse = 0;
    double r_squared = 0;
    double nmse = 0;
    size_t n = 0;
    TargetSpace space = TargetSpace::LogSeconds;
};

/// pairs are (actual, predicted) in the modeling space. Requires n >= 2 and
/// nonzero variance in the actuals; zero variance is an explicit error, never
/// a NaN report.
EvaluationReport evaluate(const std::vector<std::pair<double, double>>& pairs,
                          TargetSpace space = TargetSpace::LogSeconds);

}  // namespace qtime
