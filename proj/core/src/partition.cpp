#include "tsagg/partition.hpp"

#include <algorithm>
#include <sstream>

#include "tsagg/error.hpp"

namespace tsagg {

Partition::Partition(std::vector<std::vector<std::size_t>> clusters) : clusters_(std::move(clusters)) {
    for (auto& c : clusters_) std::sort(c.begin(), c.end());
    std::sort(clusters_.begin(), clusters_.end(), [](const auto& a, const auto& b) {
        if (a.empty() || b.empty()) return a.size() < b.size();
        return a.front() < b.front();
    });
}

Partition Partition::identity(std::size_t n) {
    std::vector<std::vector<std::size_t>> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = {i};
    return Partition(std::move(c));
}

Partition Partition::single(std::size_t n) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    return Partition({std::move(all)});
}

Partition Partition::from_rgs(std::span<const std::size_t> rgs) {
    std::vector<std::vector<std::size_t>> c;
    for (std::size_t i = 0; i < rgs.size(); ++i) {
        if (rgs[i] > c.size()) throw ContractError("from_rgs: not a restricted growth string");
        if (rgs[i] == c.size()) c.emplace_back();
        c[rgs[i]].push_back(i);
    }
    Partition p;
    p.clusters_ = std::move(c);
    return p;
}

std::size_t Partition::element_count() const {
    std::size_t n = 0;
    for (const auto& c : clusters_) n += c.size();
    return n;
}

void Partition::validate(std::size_t n) const {
    std::vector<char> seen(n, 0);
    for (const auto& c : clusters_) {
        if (c.empty()) throw ContractError("partition: empty cluster");
        for (std::size_t id : c) {
            if (id >= n) throw ContractError("partition: id " + std::to_string(id + 1) + " out of range");
            if (seen[id]) throw ContractError("partition: id " + std::to_string(id + 1) + " appears twice");
            seen[id] = 1;
        }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
        throw ContractError("partition: clusters do not cover all " + std::to_string(n) + " bases");
    }
}

std::vector<std::size_t> Partition::rgs() const {
    std::vector<std::size_t> out(element_count(), 0);
    for (std::size_t k = 0; k < clusters_.size(); ++k) {
        for (std::size_t id : clusters_[k]) {
            if (id >= out.size()) throw ContractError("partition: ids are not contiguous");
            out[id] = k;
        }
    }
    return out;
}

bool Partition::canonically_before(const Partition& other) const {
    const auto a = rgs();
    const auto b = other.rgs();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Partition Partition::merged(std::size_t a, std::size_t b) const {
    if (a == b || a >= clusters_.size() || b >= clusters_.size()) {
        throw ContractError("partition: invalid clusters to merge");
    }
    std::vector<std::vector<std::size_t>> c;
    c.reserve(clusters_.size() - 1);
    std::vector<std::size_t> joined = clusters_[a];
    joined.insert(joined.end(), clusters_[b].begin(), clusters_[b].end());
    for (std::size_t k = 0; k < clusters_.size(); ++k) {
        if (k != a && k != b) c.push_back(clusters_[k]);
    }
    c.push_back(std::move(joined));
    return Partition(std::move(c));
}

bool Partition::refines(const Partition& coarser) const {
    const auto owner = coarser.rgs();
    for (const auto& c : clusters_) {
        for (std::size_t id : c) {
            if (id >= owner.size() || owner[id] != owner[c.front()]) return false;
        }
    }
    return true;
}

std::string Partition::to_string() const {
    std::ostringstream out;
    for (std::size_t k = 0; k < clusters_.size(); ++k) {
        if (k) out << ',';
        out << '{';
        for (std::size_t i = 0; i < clusters_[k].size(); ++i) {
            if (i) out << ',';
            out << clusters_[k][i] + 1;
        }
        out << '}';
    }
    return out.str();
}

}  // namespace tsagg
