#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "grank/csr.hpp"
#include "grank/types.hpp"

namespace grank {

enum class Side : std::uint8_t { desirable = 0, undesirable = 1 };

/// An ordered item pair "desirable > undesirable".
struct PreferencePair {
    item_id desirable;
    item_id undesirable;

    friend bool operator==(const PreferencePair&, const PreferencePair&) = default;
};

/// One of the two sides of an item in the representative layer.
struct Representative {
    item_id item;
    Side side;
};

enum class Layer : std::uint8_t { user, preference, representative };

struct NodeRef {
    Layer layer;
    std::uint64_t ordinal;  // position within the layer
};

/// Row-major bijection from ordered distinct pairs onto [0, N(N-1)).
std::uint64_t preference_index(item_id desirable, item_id undesirable, std::uint32_t item_count);

/// Inverse of preference_index.
PreferencePair preference_pair_at(std::uint64_t ordinal, std::uint32_t item_count);

/// 1 iff <u, p.d, p.u> is in the observation set.
bool agreement(user_id u, const PreferencePair& p, const ObservationSet& obs);

/// 1 iff the preference backs this representative: its desirable item on the
/// desirable side, or its undesirable item on the undesirable side.
bool support(const PreferencePair& p, const Representative& r);

/// Tripartite Preference Graph: users, pairwise-preference nodes, and two
/// representative nodes per item, over a contiguous global numbering
///   users [0, M) | preferences [M, M+P) | representatives [M+P, M+P+2N).
/// Full mode materializes all N(N-1) preference nodes; pruned mode keeps only
/// pairs backed by at least one observation.
class Tpg {
public:
    static Tpg build(std::uint32_t user_count, std::uint32_t item_count, const ObservationSet& obs,
                     bool pruned = false);

    std::uint32_t user_count() const { return m_; }
    std::uint32_t item_count() const { return n_; }
    std::uint64_t preference_count() const { return preference_slots_; }
    bool pruned() const { return pruned_; }

    std::uint32_t node_count() const {
        return static_cast<std::uint32_t>(m_ + preference_slots_ + 2ull * n_);
    }
    std::uint64_t edge_count() const { return edge_count_; }

    const CsrGraph& adjacency() const { return adj_; }
    std::uint64_t degree(std::uint32_t global) const { return adj_.degree(global); }

    std::uint32_t user_node(user_id u) const;
    std::uint32_t representative_node(item_id i, Side side) const;
    /// Global id of a materialized preference node; empty in pruned mode when
    /// the pair was never observed.
    std::optional<std::uint32_t> preference_node(const PreferencePair& p) const;

    NodeRef classify(std::uint32_t global) const;
    /// Pair represented by the preference node at `slot` in [0, preference_count).
    PreferencePair preference_at_slot(std::uint64_t slot) const;
    Representative representative_at_ordinal(std::uint64_t ordinal) const;

    void save(const std::string& path) const;
    static Tpg load(const std::string& path);
    void dump_text(std::ostream& out) const;

private:
    std::uint32_t m_ = 0;
    std::uint32_t n_ = 0;
    std::uint64_t preference_slots_ = 0;
    std::uint64_t edge_count_ = 0;
    bool pruned_ = false;
    CsrGraph adj_;
    // pruned mode: sorted full-mode ordinals of the materialized preference
    // nodes; slot k represents pair pruned_ordinals_[k]
    std::vector<std::uint64_t> pruned_ordinals_;
};

}  // namespace grank
