#include "qtime/splits.hpp"

#include <numeric>

#include "qtime/errors.hpp"
#include "qtime/rng.hpp"

namespace qtime {
namespace {

std::vector<size_t> shuffled_indices(size_t n, uint64_t seed) {
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), size_t{0});
    Rng rng(seed);
    rng.shuffle(idx);
    return idx;
}

}  // namespace

TrainTestSplit split_train_test(size_t n, uint64_t seed) {
    if (n < 10) throw ContractError("split: need at least 10 samples for a 9:1 split");
    return split_train_test(n, 0.9, seed);
}

TrainTestSplit split_train_test(size_t n, double train_fraction, uint64_t seed) {
    if (n < 2) throw ContractError("split: need at least 2 samples");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw ContractError("split: train fraction must lie in (0, 1)");
    auto idx = shuffled_indices(n, seed);
    size_t train_size = static_cast<size_t>(train_fraction * static_cast<double>(n));
    if (train_size == 0) train_size = 1;
    if (train_size >= n) train_size = n - 1;
    TrainTestSplit s;
    s.train.assign(idx.begin(), idx.begin() + static_cast<ptrdiff_t>(train_size));
    s.test.assign(idx.begin() + static_cast<ptrdiff_t>(train_size), idx.end());
    return s;
}

std::vector<Fold> kfold(size_t n, size_t k, uint64_t seed) {
    if (k < 2) throw ContractError("kfold: k must be at least 2");
    if (n < k) throw ContractError("kfold: fewer samples than folds");
    auto idx = shuffled_indices(n, seed);

    std::vector<Fold> folds(k);
    size_t base = n / k;
    size_t extra = n % k;  // first `extra` folds take one more test sample
    size_t pos = 0;
    for (size_t f = 0; f < k; ++f) {
        size_t take = base + (f < extra ? 1 : 0);
        Fold& fold = folds[f];
        fold.test.assign(idx.begin() + static_cast<ptrdiff_t>(pos),
                         idx.begin() + static_cast<ptrdiff_t>(pos + take));
        fold.train.reserve(n - take);
        fold.train.insert(fold.train.end(), idx.begin(), idx.begin() + static_cast<ptrdiff_t>(pos));
        fold.train.insert(fold.train.end(), idx.begin() + static_cast<ptrdiff_t>(pos + take),
                          idx.end());
        pos += take;
    }
    return folds;
}

}  // namespace qtime
