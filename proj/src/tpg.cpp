#include "grank/tpg.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <ostream>

namespace grank {

std::uint64_t preference_index(item_id desirable, item_id undesirable, std::uint32_t item_count) {
    if (desirable == undesirable)
        throw validation_error("preference_index: a pair must involve two distinct items");
    if (desirable >= item_count || undesirable >= item_count)
        throw validation_error("preference_index: item id out of range");
    const std::uint64_t col = undesirable < desirable ? undesirable : undesirable - 1;
    return static_cast<std::uint64_t>(desirable) * (item_count - 1) + col;
}

PreferencePair preference_pair_at(std::uint64_t ordinal, std::uint32_t item_count) {
    const auto d = static_cast<item_id>(ordinal / (item_count - 1));
    const auto col = static_cast<item_id>(ordinal % (item_count - 1));
    return {d, col < d ? col : col + 1};
}

bool agreement(user_id u, const PreferencePair& p, const ObservationSet& obs) {
    return obs.contains({u, p.desirable, p.undesirable});
}

bool support(const PreferencePair& p, const Representative& r) {
    if (r.side == Side::desirable) return p.desirable == r.item;
    return p.undesirable == r.item;
}

Tpg Tpg::build(std::uint32_t user_count, std::uint32_t item_count, const ObservationSet& obs,
               bool pruned) {
    Tpg g;
    g.m_ = user_count;
    g.n_ = item_count;
    g.pruned_ = pruned;

    for (const auto& o : obs) {
        if (o.user >= user_count) throw build_error("tpg: observation user id out of range");
        if (o.desirable >= item_count || o.undesirable >= item_count)
            throw build_error("tpg: observation item id out of range");
        if (o.desirable == o.undesirable)
            throw build_error("tpg: observation with identical desirable and undesirable item");
    }

    const std::uint64_t full_slots =
        static_cast<std::uint64_t>(item_count) * (item_count > 0 ? item_count - 1 : 0);

    if (pruned) {
        g.pruned_ordinals_.reserve(obs.size());
        for (const auto& o : obs)
            g.pruned_ordinals_.push_back(preference_index(o.desirable, o.undesirable, item_count));
        std::sort(g.pruned_ordinals_.begin(), g.pruned_ordinals_.end());
        g.pruned_ordinals_.erase(
            std::unique(g.pruned_ordinals_.begin(), g.pruned_ordinals_.end()),
            g.pruned_ordinals_.end());
        g.preference_slots_ = g.pruned_ordinals_.size();
    } else {
        g.preference_slots_ = full_slots;
    }

    const std::uint32_t pref_base = user_count;
    const std::uint64_t rep_base = user_count + g.preference_slots_;

    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    edges.reserve(obs.size() + 2 * g.preference_slots_);

    for (const auto& o : obs) {
        const auto node = g.preference_node({o.desirable, o.undesirable});
        edges.emplace_back(o.user, *node);
    }
    for (std::uint64_t slot = 0; slot < g.preference_slots_; ++slot) {
        const PreferencePair p = pruned ? preference_pair_at(g.pruned_ordinals_[slot], item_count)
                                        : preference_pair_at(slot, item_count);
        const auto pnode = static_cast<std::uint32_t>(pref_base + slot);
        edges.emplace_back(pnode, static_cast<std::uint32_t>(rep_base + 2ull * p.desirable));
        edges.emplace_back(pnode, static_cast<std::uint32_t>(rep_base + 2ull * p.undesirable + 1));
    }

    g.edge_count_ = edges.size();
    g.adj_ = CsrGraph::from_edges(g.node_count(), edges);
    return g;
}

std::uint32_t Tpg::user_node(user_id u) const {
    if (u >= m_) throw validation_error("tpg: user id out of range");
    return u;
}

std::uint32_t Tpg::representative_node(item_id i, Side side) const {
    if (i >= n_) throw validation_error("tpg: item id out of range");
    return static_cast<std::uint32_t>(m_ + preference_slots_ + 2ull * i +
                                      (side == Side::undesirable ? 1 : 0));
}

std::optional<std::uint32_t> Tpg::preference_node(const PreferencePair& p) const {
    const std::uint64_t ordinal = preference_index(p.desirable, p.undesirable, n_);
    if (!pruned_) return static_cast<std::uint32_t>(m_ + ordinal);
    auto it = std::lower_bound(pruned_ordinals_.begin(), pruned_ordinals_.end(), ordinal);
    if (it == pruned_ordinals_.end() || *it != ordinal) return std::nullopt;
    return static_cast<std::uint32_t>(m_ + (it - pruned_ordinals_.begin()));
}

NodeRef Tpg::classify(std::uint32_t global) const {
    if (global < m_) return {Layer::user, global};
    if (global < m_ + preference_slots_) return {Layer::preference, global - m_};
    return {Layer::representative, global - m_ - preference_slots_};
}

PreferencePair Tpg::preference_at_slot(std::uint64_t slot) const {
    const std::uint64_t ordinal = pruned_ ? pruned_ordinals_.at(slot) : slot;
    return preference_pair_at(ordinal, n_);
}

Representative Tpg::representative_at_ordinal(std::uint64_t ordinal) const {
    return {static_cast<item_id>(ordinal / 2),
            ordinal % 2 == 0 ? Side::desirable : Side::undesirable};
}

namespace {

constexpr char kMagic[4] = {'T', 'P', 'G', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(buf, 8);
}

void put_u32(std::ostream& out, std::uint32_t v) {
    char buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(buf, 4);
}

std::uint64_t get_u64(std::istream& in) {
    unsigned char buf[8];
    in.read(reinterpret_cast<char*>(buf), 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | buf[i];
    return v;
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char buf[4];
    in.read(reinterpret_cast<char*>(buf), 4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | buf[i];
    return v;
}

}  // namespace

void Tpg::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open graph snapshot for writing: " + path);
    out.write(kMagic, 4);
    put_u64(out, m_);
    put_u64(out, n_);
    put_u64(out, preference_slots_);
    put_u64(out, edge_count_);
    put_u64(out, pruned_ ? 1 : 0);
    if (pruned_)
        for (auto o : pruned_ordinals_) put_u64(out, o);
    for (auto o : adj_.offsets) put_u64(out, o);
    for (auto nb : adj_.neighbors) put_u32(out, nb);
    if (!out) throw io_error("failed while writing graph snapshot: " + path);
}

Tpg Tpg::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open graph snapshot: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw io_error("not a TPG1 snapshot: " + path);

    Tpg g;
    g.m_ = static_cast<std::uint32_t>(get_u64(in));
    g.n_ = static_cast<std::uint32_t>(get_u64(in));
    g.preference_slots_ = get_u64(in);
    g.edge_count_ = get_u64(in);
    g.pruned_ = get_u64(in) != 0;
    if (g.pruned_) {
        g.pruned_ordinals_.resize(g.preference_slots_);
        for (auto& o : g.pruned_ordinals_) o = get_u64(in);
    }
    g.adj_.offsets.resize(static_cast<std::size_t>(g.node_count()) + 1);
    for (auto& o : g.adj_.offsets) o = get_u64(in);
    g.adj_.neighbors.resize(g.adj_.offsets.back());
    for (auto& nb : g.adj_.neighbors) nb = get_u32(in);
    if (!in) throw io_error("truncated graph snapshot: " + path);
    return g;
}

void Tpg::dump_text(std::ostream& out) const {
    const std::uint32_t v = node_count();
    for (std::uint32_t node = 0; node < v; ++node) {
        out << node << ':';
        for (auto nb : adj_.neighbors_of(node)) out << ' ' << nb;
        out << '\n';
    }
}

}  // namespace grank
