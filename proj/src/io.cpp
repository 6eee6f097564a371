#include "grank/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

namespace grank::io {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open " + path + " for writing");
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path + " for reading");
    return in;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw io_error("write to " + path + " failed");
}

// strips a trailing CR so CRLF inputs parse the same as LF ones
void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

template <typename T>
T parse_field(std::string_view text, const std::string& path, std::size_t line_no) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw parse_error(path + ":" + std::to_string(line_no) + ": bad field '" +
                          std::string(text) + "'");
    return value;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

}  // namespace

std::string format_double(double v) {
    // shortest representation that parses back to the same double
    char buf[64];
    char* end = std::to_chars(buf, buf + sizeof buf, v).ptr;
    return std::string(buf, end);
}

void write_observations(const std::string& path, const ObservationSet& obs) {
    auto out = open_out(path);
    for (const auto& o : obs)
        out << o.user << '\t' << o.desirable << '\t' << o.undesirable << '\n';
    finish(out, path);
}

ObservationSet read_observations(const std::string& path) {
    auto in = open_in(path);
    std::vector<Observation> obs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields.size() != 3)
            throw parse_error(path + ":" + std::to_string(line_no) +
                              ": expected 3 tab-separated fields");
        obs.push_back({parse_field<user_id>(fields[0], path, line_no),
                       parse_field<item_id>(fields[1], path, line_no),
                       parse_field<item_id>(fields[2], path, line_no)});
    }
    return ObservationSet::from_unsorted(std::move(obs));
}

void write_id_map(const std::string& path, std::span<const std::int64_t> raw_by_dense) {
    auto out = open_out(path);
    for (std::size_t dense = 0; dense < raw_by_dense.size(); ++dense)
        out << raw_by_dense[dense] << '\t' << dense << '\n';
    finish(out, path);
}

std::vector<std::int64_t> read_id_map(const std::string& path) {
    auto in = open_in(path);
    std::vector<std::int64_t> raw_by_dense;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields.size() != 2)
            throw parse_error(path + ":" + std::to_string(line_no) +
                              ": expected 2 tab-separated fields");
        const auto raw = parse_field<std::int64_t>(fields[0], path, line_no);
        const auto dense = parse_field<std::uint32_t>(fields[1], path, line_no);
        if (dense != raw_by_dense.size())
            throw parse_error(path + ":" + std::to_string(line_no) +
                              ": dense ids must ascend from 0 without gaps");
        raw_by_dense.push_back(raw);
    }
    return raw_by_dense;
}

void write_ratings(const std::string& path, std::span<const RatingRecord> records) {
    auto out = open_out(path);
    for (const auto& r : records)
        out << r.user << '\t' << r.item << '\t' << format_double(r.rating) << '\t' << r.timestamp
            << '\n';
    finish(out, path);
}

std::vector<RatingRecord> read_ratings(const std::string& path) {
    auto in = open_in(path);
    std::vector<RatingRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields.size() != 4)
            throw parse_error(path + ":" + std::to_string(line_no) +
                              ": expected 4 tab-separated fields");
        records.push_back({parse_field<user_id>(fields[0], path, line_no),
                           parse_field<item_id>(fields[1], path, line_no),
                           parse_field<double>(fields[2], path, line_no),
                           parse_field<std::int64_t>(fields[3], path, line_no)});
    }
    return records;
}

void write_recommendations(const std::string& path, std::span<const RecommendationList> lists) {
    auto out = open_out(path);
    out << "user,rank,item,gr\n";
    for (const auto& list : lists) {
        std::uint32_t rank = 1;
        for (const auto& e : list.entries)
            out << list.user << ',' << rank++ << ',' << e.item << ',' << format_double(e.gr)
                << '\n';
    }
    finish(out, path);
}

void write_ppr(const std::string& path, const PprVector& vec) {
    auto out = open_out(path);
    out << "node,value\n";
    for (std::size_t node = 0; node < vec.values.size(); ++node)
        out << node << ',' << format_double(vec.values[node]) << '\n';
    finish(out, path);
}

void write_report(const std::string& path, std::string_view dataset,
                  std::span<const eval::EvalReport> reports) {
    auto out = open_out(path);
    out << "algorithm,dataset,variant,T,K,mean_ndcg,n_users\n";
    for (const auto& report : reports)
        for (std::size_t ki = 0; ki < report.ks.size(); ++ki)
            out << eval::algorithm_name(report.algorithm) << ',' << dataset << ','
                << report.variant << ',' << report.train_per_user << ',' << report.ks[ki] << ','
                << format_double(report.mean_ndcg(ki)) << ',' << report.users.size() << '\n';
    finish(out, path);
}

void write_ttests(const std::string& path, std::span<const TTestRow> rows) {
    auto out = open_out(path);
    out << "T,K,algorithm_vs,p_value\n";
    for (const auto& row : rows)
        out << row.train_per_user << ',' << row.k << ',' << row.algorithm_vs << ','
            << format_double(row.p_value) << '\n';
    finish(out, path);
}

void write_scalability(const std::string& path, std::span<const ScalabilityRow> rows) {
    auto out = open_out(path);
    out << "factor,level,factor_value,mean_seconds,var_seconds\n";
    for (const auto& row : rows)
        out << row.factor << ',' << format_double(row.point.level) << ',' << row.point.factor_value
            << ',' << format_double(row.point.mean_seconds) << ','
            << format_double(row.point.var_seconds) << '\n';
    finish(out, path);
}

std::uint64_t fnv1a64_file(const std::string& path) {
    auto in = open_in(path);
    std::uint64_t hash = 14695981039346656037ull;
    char buf[65536];
    while (in.read(buf, sizeof buf), in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 1099511628211ull;
        }
    }
    if (in.bad()) throw io_error("read from " + path + " failed");
    return hash;
}

void write_manifest(const std::string& path,
                    std::span<const std::pair<std::string, std::string>> entries) {
    auto out = open_out(path);
    for (const auto& [key, value] : entries) out << key << '=' << value << '\n';
    finish(out, path);
}

}  // namespace grank::io
