// Enumeration of the auxiliary-wavefunction multi-indices n = [n_0..n_{K-1}]
// with sum(n) <= L, in graded order (by depth, then lexicographically
// descending), plus O(1) neighbour lookups for the ladder moves.
#pragma once

#include <cstdint>
#include <vector>

namespace hseom {

class HierarchySpace {
public:
    static constexpr uint32_t outside = UINT32_MAX;

    HierarchySpace(int n_modes, int depth, std::size_t max_elements = 50'000'000);

    int n_modes() const { return n_modes_; }
    int depth() const { return depth_; }
    std::size_t size() const { return counts_.size(); }

    // Multi-index of a dense identifier.
    const std::vector<uint16_t>& counts(uint32_t id) const { return counts_[id]; }
    int total(uint32_t id) const { return totals_[id]; }

    // n + e_k / n - e_k; `outside` when truncated or negative.
    uint32_t plus(uint32_t id, int k) const {
        return plus_[static_cast<std::size_t>(id) * n_modes_ + k];
    }
    uint32_t minus(uint32_t id, int k) const {
        return minus_[static_cast<std::size_t>(id) * n_modes_ + k];
    }

    // n - e_k + e_kp (the in-level move; composition keeps the total fixed,
    // so only n_k > 0 can fail).
    uint32_t move(uint32_t id, int k_minus, int k_plus) const {
        const uint32_t down = minus(id, k_minus);
        return down == outside ? outside : plus(down, k_plus);
    }

    // Dense identifier of an explicit multi-index, or `outside`.
    uint32_t find(const std::vector<uint16_t>& index) const;

    // Number of indices for given parameters: C(K+L, L).
    static std::size_t count(int n_modes, int depth);

private:
    int n_modes_;
    int depth_;
    std::vector<std::vector<uint16_t>> counts_;
    std::vector<uint8_t> totals_;
    std::vector<uint32_t> plus_;
    std::vector<uint32_t> minus_;
};

} // namespace hseom
