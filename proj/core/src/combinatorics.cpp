#include "tsagg/combinatorics.hpp"

#include <string>

#include "tsagg/error.hpp"

namespace tsagg {

BigInt binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

BigInt bell_number(std::size_t n) {
    std::vector<BigInt> b{1};
    for (std::size_t m = 0; m < n; ++m) {
        BigInt next = 0;
        for (std::size_t k = 0; k <= m; ++k) next += binomial(m, k) * b[k];
        b.push_back(next);
    }
    return b[n];
}

BigInt stirling2(std::size_t n, std::size_t k) {
    if (k > n) throw ContractError("stirling2: k = " + std::to_string(k) + " exceeds n = " + std::to_string(n));
    // S(m, j) = j S(m-1, j) + S(m-1, j-1), one row at a time.
    std::vector<BigInt> row(k + 1, 0);
    row[0] = 1;
    for (std::size_t m = 1; m <= n; ++m) {
        for (std::size_t j = std::min(m, k); j >= 1; --j) row[j] = j * row[j] + row[j - 1];
        row[0] = 0;
    }
    return row[k];
}

PartitionEnumerator::PartitionEnumerator(std::size_t n, std::size_t k) : k_(k), rgs_(n, 0), prefix_blocks_(n, 0) {
    if (k < 1 || k > n) {
        throw ContractError("enumerate partitions: k = " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
    }
    // Smallest string: zeros, then 1, 2, ..., k-1 in the last positions.
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t tail = n - i;  // positions i..n-1
        rgs_[i] = tail < k ? k - tail : 0;
        prefix_blocks_[i] = std::max(i ? prefix_blocks_[i - 1] : 0, rgs_[i] + 1);
    }
}

bool PartitionEnumerator::next() {
    const std::size_t n = rgs_.size();
    for (std::size_t i = n; i-- > 1;) {
        const std::size_t used_before = prefix_blocks_[i - 1];
        const std::size_t v = rgs_[i] + 1;
        if (v > used_before || v >= k_) continue;
        const std::size_t used = std::max(used_before, v + 1);
        if (n - 1 - i < k_ - used) continue;

        rgs_[i] = v;
        prefix_blocks_[i] = used;
        std::size_t blocks = used;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (n - j > k_ - blocks) {
                rgs_[j] = 0;
            } else {
                rgs_[j] = blocks++;
            }
            prefix_blocks_[j] = blocks;
        }
        return true;
    }
    return false;
}

std::uint64_t count_partitions(std::size_t n, std::size_t k) {
    PartitionEnumerator e(n, k);
    std::uint64_t count = 1;
    while (e.next()) ++count;
    return count;
}

}  // namespace tsagg
