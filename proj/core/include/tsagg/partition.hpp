#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tsagg {

/// A set partition of basis ids {0, ..., n-1}. Always kept canonical: ids
/// ascending inside each cluster, clusters ordered by their smallest id.
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<std::vector<std::size_t>> clusters);

    static Partition identity(std::size_t n);
    static Partition single(std::size_t n);
    /// Restricted growth string: rgs[i] is the cluster of id i.
    static Partition from_rgs(std::span<const std::size_t> rgs);

    const std::vector<std::vector<std::size_t>>& clusters() const { return clusters_; }
    std::size_t size() const { return clusters_.size(); }
    std::size_t element_count() const;

    /// Throws ContractError unless clusters are nonempty, disjoint and cover
    /// exactly {0, ..., n-1}.
    void validate(std::size_t n) const;

    std::vector<std::size_t> rgs() const;
    /// Order used for tie-breaking: lexicographic on the restricted growth string.
    bool canonically_before(const Partition& other) const;

    /// Clusters a and b (indices into clusters()) replaced by their union.
    Partition merged(std::size_t a, std::size_t b) const;

    /// Every cluster of *this is contained in some cluster of `coarser`.
    bool refines(const Partition& coarser) const;

    /// "{1},{2,3}" with one-based ids.
    std::string to_string() const;

    bool operator==(const Partition&) const = default;

private:
    std::vector<std::vector<std::size_t>> clusters_;
};

}  // namespace tsagg
