#include "grank/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

#include "grank/rng.hpp"

namespace grank::ingest {

DatasetFormat format_from_name(const std::string& name) {
    if (name == "ml-100k" || name == "tab" || name == "tsv") return DatasetFormat::movielens_tab;
    if (name == "ml-1m" || name == "dat") return DatasetFormat::movielens_dat;
    throw validation_error("unknown dataset format: " + name);
}

std::string format_name(DatasetFormat fmt) {
    return fmt == DatasetFormat::movielens_tab ? "ml-100k" : "ml-1m";
}

IdMap IdMap::from_raw_ids(std::vector<std::int64_t> raw_ids) {
    std::sort(raw_ids.begin(), raw_ids.end());
    raw_ids.erase(std::unique(raw_ids.begin(), raw_ids.end()), raw_ids.end());
    IdMap m;
    m.dense_to_raw_ = std::move(raw_ids);
    m.raw_to_dense_.reserve(m.dense_to_raw_.size());
    for (std::uint32_t i = 0; i < m.dense_to_raw_.size(); ++i)
        m.raw_to_dense_.emplace(m.dense_to_raw_[i], i);
    return m;
}

std::uint32_t IdMap::dense(std::int64_t raw) const {
    auto it = raw_to_dense_.find(raw);
    if (it == raw_to_dense_.end())
        throw validation_error("id not present in id-map: " + std::to_string(raw));
    return it->second;
}

namespace {

struct RawRating {
    std::int64_t user;
    std::int64_t item;
    double rating;
    std::int64_t timestamp;
};

std::vector<std::string_view> split_fields(std::string_view line, DatasetFormat fmt) {
    std::vector<std::string_view> out;
    const std::string_view sep = fmt == DatasetFormat::movielens_tab ? "\t" : "::";
    std::size_t pos = 0;
    while (pos <= line.size()) {
        std::size_t next = line.find(sep, pos);
        if (next == std::string_view::npos) {
            out.push_back(line.substr(pos));
            break;
        }
        out.push_back(line.substr(pos, next - pos));
        pos = next + sep.size();
    }
    return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

}  // namespace

RatingData parse_ratings(const std::string& path, DatasetFormat fmt) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open ratings file: " + path);

    std::vector<RawRating> raw;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_fields(line, fmt);
        if (fields.size() < 3)
            throw parse_error(path + ":" + std::to_string(line_no) + ": expected at least 3 fields");
        RawRating r{};
        if (!parse_number(fields[0], r.user) || !parse_number(fields[1], r.item))
            throw parse_error(path + ":" + std::to_string(line_no) + ": malformed id");
        if (!parse_number(fields[2], r.rating))
            throw parse_error(path + ":" + std::to_string(line_no) + ": malformed rating");
        r.timestamp = 0;
        if (fields.size() > 3 && !fields[3].empty() && !parse_number(fields[3], r.timestamp))
            throw parse_error(path + ":" + std::to_string(line_no) + ": malformed timestamp");
        raw.push_back(r);
    }

    RatingData data;
    if (raw.empty()) return data;

    std::vector<std::int64_t> user_ids, item_ids;
    user_ids.reserve(raw.size());
    item_ids.reserve(raw.size());
    for (const auto& r : raw) {
        user_ids.push_back(r.user);
        item_ids.push_back(r.item);
    }
    data.users = IdMap::from_raw_ids(std::move(user_ids));
    data.items = IdMap::from_raw_ids(std::move(item_ids));

    data.records.reserve(raw.size());
    std::set<std::pair<user_id, item_id>> seen;
    std::size_t n = 0;
    for (const auto& r : raw) {
        ++n;
        if (r.rating < data.scale_min || r.rating > data.scale_max)
            throw validation_error(path + ": record " + std::to_string(n) + ": rating " +
                                   std::to_string(r.rating) + " outside scale");
        RatingRecord rec{data.users.dense(r.user), data.items.dense(r.item), r.rating, r.timestamp};
        if (!seen.emplace(rec.user, rec.item).second)
            throw validation_error(path + ": record " + std::to_string(n) +
                                   ": duplicate (user,item) pair");
        data.records.push_back(rec);
    }
    return data;
}

ObservationSet ratings_to_observations(std::span<const RatingRecord> records) {
    // group per user, then emit every strictly ordered pair
    std::vector<RatingRecord> sorted(records.begin(), records.end());
    std::sort(sorted.begin(), sorted.end(), [](const RatingRecord& a, const RatingRecord& b) {
        return a.user != b.user ? a.user < b.user : a.item < b.item;
    });

    std::vector<Observation> out;
    std::size_t lo = 0;
    while (lo < sorted.size()) {
        std::size_t hi = lo;
        while (hi < sorted.size() && sorted[hi].user == sorted[lo].user) ++hi;
        for (std::size_t a = lo; a < hi; ++a) {
            for (std::size_t b = lo; b < hi; ++b) {
                if (sorted[a].rating > sorted[b].rating)
                    out.push_back({sorted[a].user, sorted[a].item, sorted[b].item});
            }
        }
        lo = hi;
    }
    return ObservationSet::from_unsorted(std::move(out));
}

void BinaryFeedback::validate() const {
    if (items_by_user.size() != user_count)
        throw validation_error("feedback: items_by_user size does not match user_count");
    for (const auto& items : items_by_user)
        for (item_id i : items)
            if (i >= item_count) throw validation_error("feedback: item id out of range");
}

ObservationSet feedback_to_observations(const BinaryFeedback& likes, const BinaryFeedback& dislikes,
                                        std::vector<std::string>* warnings) {
    if (likes.user_count != dislikes.user_count || likes.item_count != dislikes.item_count)
        throw validation_error("feedback: like and dislike matrices index different universes");
    likes.validate();
    dislikes.validate();

    std::vector<Observation> out;
    for (user_id u = 0; u < likes.user_count; ++u) {
        const auto& liked = likes.items_by_user[u];
        const auto& disliked = dislikes.items_by_user[u];
        if (warnings) {
            for (item_id i : liked)
                if (std::find(disliked.begin(), disliked.end(), i) != disliked.end())
                    warnings->push_back("user " + std::to_string(u) + " both likes and dislikes item " +
                                        std::to_string(i));
        }
        for (item_id i : liked)
            for (item_id j : disliked)
                if (i != j) out.push_back({u, i, j});
    }
    return ObservationSet::from_unsorted(std::move(out));
}

ObservationSet sessions_to_observations(std::span<const Session> sessions) {
    std::vector<Observation> out;
    for (const auto& w : sessions) {
        for (item_id i : w.bought)
            if (std::find(w.clicked_not_bought.begin(), w.clicked_not_bought.end(), i) !=
                w.clicked_not_bought.end())
                throw validation_error("session: bought and clicked_not_bought must be disjoint");
        for (item_id i : w.bought)
            for (item_id j : w.clicked_not_bought) out.push_back({w.user, i, j});
    }
    return ObservationSet::from_unsorted(std::move(out));
}

std::vector<Dataset> split(std::span<const RatingRecord> records, const SplitSpec& spec,
                           std::uint32_t user_count, std::uint32_t item_count) {
    spec.validate();

    std::vector<std::vector<RatingRecord>> by_user(user_count);
    for (const auto& r : records) {
        if (r.user >= user_count || r.item >= item_count)
            throw validation_error("split: record outside the declared universe");
        by_user[r.user].push_back(r);
    }
    // canonical per-user order so sampling is independent of input order
    for (auto& recs : by_user)
        std::sort(recs.begin(), recs.end(),
                  [](const RatingRecord& a, const RatingRecord& b) { return a.item < b.item; });

    const std::uint32_t threshold = spec.train_per_user + spec.min_test_items;
    std::vector<Dataset> variants(spec.variants);
    bool any_user = false;

    for (std::uint32_t v = 0; v < spec.variants; ++v) {
        Dataset& ds = variants[v];
        ds.user_count = user_count;
        ds.item_count = item_count;
        for (user_id u = 0; u < user_count; ++u) {
            const auto& recs = by_user[u];
            if (recs.size() < threshold) continue;  // dropped from both partitions
            any_user = true;
            KeyedRng rng(spec.rng_seed, v, u);
            auto picked = sample_without_replacement(static_cast<std::uint32_t>(recs.size()),
                                                     spec.train_per_user, rng);
            std::vector<bool> in_train(recs.size(), false);
            for (auto idx : picked) in_train[idx] = true;
            for (std::size_t i = 0; i < recs.size(); ++i)
                (in_train[i] ? ds.train : ds.test).push_back(recs[i]);
        }
    }
    if (!any_user)
        throw validation_error("split: no user holds at least " + std::to_string(threshold) +
                               " ratings; every dataset would be empty");
    return variants;
}

}  // namespace grank::ingest
