#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tsagg/partition.hpp"

namespace tsagg {

using BigInt = boost::multiprecision::cpp_int;

BigInt binomial(std::size_t n, std::size_t k);

/// B_0 = 1, B_{n+1} = sum_k C(n, k) B_k.
BigInt bell_number(std::size_t n);

/// Stirling number of the second kind. Throws ContractError if k > n.
BigInt stirling2(std::size_t n, std::size_t k);

/// Partitions of {0, ..., n-1} into exactly k nonempty blocks, as restricted
/// growth strings in lexicographic order.
///
///     PartitionEnumerator e(4, 2);
///     do { use(e.partition()); } while (e.next());
class PartitionEnumerator {
public:
    /// Throws ContractError unless 1 <= k <= n.
    PartitionEnumerator(std::size_t n, std::size_t k);

    const std::vector<std::size_t>& rgs() const { return rgs_; }
    Partition partition() const { return Partition::from_rgs(rgs_); }

    /// Advances to the next partition; false once exhausted.
    bool next();

private:
    std::size_t k_;
    std::vector<std::size_t> rgs_;
    std::vector<std::size_t> prefix_blocks_;  // blocks used by rgs_[0..i]
};

/// Number of partitions produced by PartitionEnumerator(n, k).
std::uint64_t count_partitions(std::size_t n, std::size_t k);

}  // namespace tsagg
