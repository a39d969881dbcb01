#include "qtime/shap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qtime/errors.hpp"
#include "qtime/hash.hpp"
#include "qtime/parallel.hpp"
#include "qtime/rng.hpp"

namespace qtime {

std::vector<std::vector<double>> shap_values(const GlobalPredictFn& predict,
                                             const std::vector<std::vector<double>>& globals,
                                             const std::vector<double>& baseline,
                                             int n_permutations, uint64_t seed) {
    if (globals.empty()) throw ContractError("shap_values: no samples");
    if (n_permutations < 1) throw ContractError("shap_values: need at least one permutation");
    const size_t dim = baseline.size();
    for (const auto& g : globals) {
        if (g.size() != dim) throw ContractError("shap_values: feature dimension mismatch");
    }

    std::vector<std::vector<double>> attributions(globals.size());
    parallel_for(globals.size(), [&](size_t s) {
        Rng rng(derive_seed(seed, s));
        const std::vector<double>& x = globals[s];
        std::vector<double> phi(dim, 0.0);
        std::vector<size_t> perm(dim);
        std::iota(perm.begin(), perm.end(), size_t{0});
        std::vector<double> z(dim);

        for (int p = 0; p < n_permutations; ++p) {
            rng.shuffle(perm);
            z = baseline;
            double prev = predict(s, z);
            for (size_t j : perm) {
                z[j] = x[j];
                double cur = predict(s, z);
                phi[j] += cur - prev;
                prev = cur;
            }
        }
        const double inv = 1.0 / static_cast<double>(n_permutations);
        for (double& v : phi) v *= inv;
        attributions[s] = std::move(phi);
    });
    return attributions;
}

ImportanceReport shap_importance(const GlobalPredictFn& predict,
                                 const std::vector<std::vector<double>>& globals,
                                 const std::vector<double>& baseline,
                                 const std::vector<std::string>& feature_names,
                                 int n_permutations, uint64_t seed) {
    if (feature_names.size() != baseline.size())
        throw ContractError("shap_importance: name list does not match feature dimension");
    auto attributions = shap_values(predict, globals, baseline, n_permutations, seed);

    ImportanceReport report;
    report.names = feature_names;
    report.mean_abs.assign(baseline.size(), 0.0);
    for (const auto& phi : attributions) {
        for (size_t c = 0; c < phi.size(); ++c) report.mean_abs[c] += std::fabs(phi[c]);
    }
    const double inv = 1.0 / static_cast<double>(attributions.size());
    for (double& v : report.mean_abs) v *= inv;

    report.ranking.resize(baseline.size());
    std::iota(report.ranking.begin(), report.ranking.end(), size_t{0});
    std::stable_sort(report.ranking.begin(), report.ranking.end(), [&](size_t a, size_t b) {
        return report.mean_abs[a] > report.mean_abs[b];
    });
    return report;
}

}  // namespace qtime
