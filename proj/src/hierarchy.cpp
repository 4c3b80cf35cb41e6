#include "hseom/hierarchy.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace hseom {

std::size_t HierarchySpace::count(int n_modes, int depth) {
    // C(K + L, L) with overflow check against SIZE_MAX.
    std::size_t result = 1;
    for (int i = 1; i <= depth; ++i) {
        const std::size_t num = static_cast<std::size_t>(n_modes) + i;
        if (result > SIZE_MAX / num) throw std::overflow_error("hierarchy count overflow");
        result = result * num / i;
    }
    return result;
}

namespace {

// All multi-indices with the given exact total, lexicographically descending.
void enumerate_level(int n_modes, int total, std::vector<uint16_t>& work, int mode,
                     int remaining, std::vector<std::vector<uint16_t>>& out) {
    if (mode == n_modes - 1) {
        work[static_cast<std::size_t>(mode)] = static_cast<uint16_t>(remaining);
        out.push_back(work);
        return;
    }
    for (int v = remaining; v >= 0; --v) {
        work[static_cast<std::size_t>(mode)] = static_cast<uint16_t>(v);
        enumerate_level(n_modes, total, work, mode + 1, remaining - v, out);
    }
}

} // namespace

HierarchySpace::HierarchySpace(int n_modes, int depth, std::size_t max_elements)
    : n_modes_(n_modes), depth_(depth) {
    if (n_modes < 1) throw std::invalid_argument("HierarchySpace: n_modes < 1");
    if (depth < 0) throw std::invalid_argument("HierarchySpace: depth < 0");
    const std::size_t n = count(n_modes, depth);
    if (n > max_elements)
        throw std::length_error("HierarchySpace: size exceeds the configured budget");

    counts_.reserve(n);
    std::vector<uint16_t> work(static_cast<std::size_t>(n_modes), 0);
    for (int level = 0; level <= depth; ++level)
        enumerate_level(n_modes, level, work, 0, level, counts_);

    totals_.resize(n);
    std::map<std::vector<uint16_t>, uint32_t> lookup;
    for (std::size_t id = 0; id < n; ++id) {
        int t = 0;
        for (auto v : counts_[id]) t += v;
        totals_[id] = static_cast<uint8_t>(t);
        lookup[counts_[id]] = static_cast<uint32_t>(id);
    }

    plus_.assign(n * static_cast<std::size_t>(n_modes), outside);
    minus_.assign(n * static_cast<std::size_t>(n_modes), outside);
    std::vector<uint16_t> probe;
    for (std::size_t id = 0; id < n; ++id) {
        for (int k = 0; k < n_modes; ++k) {
            const std::size_t slot = id * static_cast<std::size_t>(n_modes) +
                                     static_cast<std::size_t>(k);
            if (totals_[id] < depth) {
                probe = counts_[id];
                ++probe[static_cast<std::size_t>(k)];
                plus_[slot] = lookup.at(probe);
            }
            if (counts_[id][static_cast<std::size_t>(k)] > 0) {
                probe = counts_[id];
                --probe[static_cast<std::size_t>(k)];
                minus_[slot] = lookup.at(probe);
            }
        }
    }
}

uint32_t HierarchySpace::find(const std::vector<uint16_t>& index) const {
    if (index.size() != static_cast<std::size_t>(n_modes_)) return outside;
    const auto it = std::find(counts_.begin(), counts_.end(), index);
    return it == counts_.end() ? outside
                               : static_cast<uint32_t>(it - counts_.begin());
}

} // namespace hseom
