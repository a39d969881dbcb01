#pragma once

#include <cstdint>
#include <vector>

namespace qtime {

struct TrainTestSplit {
    std::vector<size_t> train;
    std::vector<size_t> test;
};

/// Deterministic 9:1 split over indices [0, n): Fisher-Yates shuffle under the
/// seed, first floor(0.9 n) indices train, remainder test. Requires n >= 10.
TrainTestSplit split_train_test(size_t n, uint64_t seed);

/// Same mechanism with an arbitrary train fraction in (0, 1).
TrainTestSplit split_train_test(size_t n, double train_fraction, uint64_t seed);

struct Fold {
    std::vector<size_t> train;
    std::vector<size_t> test;
};

/// k-fold partition: one shuffle under the seed, then k contiguous test
/// blocks whose sizes differ by at most one. Test sets are disjoint and cover
/// [0, n). Requires n >= k >= 2.
std::vector<Fold> kfold(size_t n, size_t k, uint64_t seed);

}  // namespace qtime
