#pragma once

// Weakly increasing multi-indices of length p over {0,...,n-1}; the index
// sets are cached per (n, p) since they back every symmetric tensor.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "minktens/common.hpp"

namespace minktens {

using MultiIndex = std::vector<int>;  // sorted ascending, values in [0, n)

class MultiIndexSet {
public:
    MultiIndexSet(int n, int p) : n_(n), p_(p) {
        if (n < 1 || p < 0 || p > 16) throw std::invalid_argument("MultiIndexSet: bad (n, p)");
        MultiIndex cur(p, 0);
        for (;;) {
            indices_.push_back(cur);
            lookup_[pack(cur)] = static_cast<int>(indices_.size()) - 1;
            int i = p - 1;
            while (i >= 0 && cur[i] == n - 1) --i;
            if (i < 0) break;
            int v = cur[i] + 1;
            for (int j = i; j < p; ++j) cur[j] = v;
        }
        mult_.resize(indices_.size());
        for (std::size_t t = 0; t < indices_.size(); ++t) {
            // number of distinct permutations p! / prod(multiplicities!)
            double m = factorial(p_);
            int run = 1;
            for (int j = 1; j <= p_; ++j) {
                if (j < p_ && indices_[t][j] == indices_[t][j - 1]) {
                    ++run;
                } else {
                    m /= factorial(run);
                    run = 1;
                }
            }
            mult_[t] = m;
        }
    }

    int n() const { return n_; }
    int p() const { return p_; }
    int size() const { return static_cast<int>(indices_.size()); }
    const MultiIndex& operator[](int i) const { return indices_[i]; }

    // Multiplicity p!/prod(mult!) of index i, i.e. the number of argument
    // orderings that hit the same coefficient.
    double multiplicity(int i) const { return mult_[i]; }

    int position(const MultiIndex& sorted) const {
        auto it = lookup_.find(pack(sorted));
        if (it == lookup_.end()) throw std::out_of_range("MultiIndexSet::position");
        return it->second;
    }

    int position_of_unsorted(MultiIndex idx) const {
        std::sort(idx.begin(), idx.end());
        return position(idx);
    }

    static const MultiIndexSet& get(int n, int p) {
        static std::mutex mu;
        static std::map<std::pair<int, int>, std::unique_ptr<MultiIndexSet>> cache;
        std::lock_guard<std::mutex> lk(mu);
        auto key = std::make_pair(n, p);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, std::make_unique<MultiIndexSet>(n, p)).first;
        return *it->second;
    }

private:
    static std::uint64_t pack(const MultiIndex& idx) {
        std::uint64_t key = 0;
        for (int v : idx) key = key * 5 + static_cast<std::uint64_t>(v + 1);
        return key;
    }

    int n_, p_;
    std::vector<MultiIndex> indices_;
    std::vector<double> mult_;
    std::map<std::uint64_t, int> lookup_;
};

}  // namespace minktens
