#pragma once

#include <compare>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace hsd {

/// Exponent vector of a monomial xi^alpha on R^n.
struct MultiIndex {
    std::vector<int> k;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> exps) : k(std::move(exps)) {
        for (int e : k)
            if (e < 0) throw std::invalid_argument("MultiIndex: negative exponent");
    }
    MultiIndex(std::initializer_list<int> exps) : MultiIndex(std::vector<int>(exps)) {}

    int dim() const { return static_cast<int>(k.size()); }
    int order() const { return std::accumulate(k.begin(), k.end(), 0); }

    auto operator<=>(const MultiIndex&) const = default;
};

} // namespace hsd
