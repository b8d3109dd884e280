#pragma once

#include <vector>

namespace locbench {

// Binomial coefficient, saturating at a large double instead of overflowing.
inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (k > n - k) k = n - k;
    double v = 1.0;
    for (int i = 1; i <= k; ++i) {
        v = v * static_cast<double>(n - k + i) / static_cast<double>(i);
        if (v > 1e18) return 1e18;
    }
    return v;
}

// Visits every k-subset of {0..n-1} in lexicographic order.
// fn receives the current subset as a sorted index vector.
template <typename F>
void for_each_combination(int n, int k, F&& fn) {
    if (k < 0 || k > n) return;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        fn(const_cast<const std::vector<int>&>(idx));
        int pos = k - 1;
        while (pos >= 0 && idx[pos] == n - k + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
}

}  // namespace locbench
