#include "pdsc/harness/csv.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace pdsc::harness {

namespace {

std::vector<std::vector<std::string>> parse_table(std::string_view text, std::string_view header,
                                                  std::size_t columns) {
    std::vector<std::vector<std::string>> rows;
    std::size_t pos = 0;
    bool first = true;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (first) {
            if (line != header) throw CsvError("unexpected CSV header '" + std::string(line) + "'");
            first = false;
            continue;
        }
        if (line.empty()) continue;
        auto fields = split_row(line);
        if (fields.size() != columns) {
            throw CsvError("CSV row has " + std::to_string(fields.size()) + " fields, expected " +
                           std::to_string(columns));
        }
        rows.push_back(std::move(fields));
    }
    if (first) throw CsvError("CSV text has no header");
    return rows;
}

class RowBuilder {
public:
    RowBuilder& add(std::string_view s) {
        if (started_) row_ += ',';
        started_ = true;
        row_ += s;
        return *this;
    }
    RowBuilder& add(double v) { return add(format_double(v)); }
    RowBuilder& add(const std::optional<double>& v) { return add(format_optional(v)); }
    RowBuilder& add_int(std::int64_t v) { return add(std::to_string(v)); }
    RowBuilder& add_uint(std::uint64_t v) { return add(std::to_string(v)); }
    std::string finish() { return std::move(row_) + '\n'; }

private:
    std::string row_;
    bool started_ = false;
};

struct Moments {
    std::optional<double> mean;
    std::optional<double> stddev;
};

Moments moments(const std::vector<double>& xs) {
    Moments m;
    if (xs.empty()) return m;
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / static_cast<double>(xs.size());
    m.mean = mean;
    if (xs.size() >= 2) {
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        m.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return m;
}

}  // namespace

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::vector<std::string> split_row(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            fields.emplace_back(line.substr(pos));
            return fields;
        }
        fields.emplace_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
}

double parse_double(std::string_view field) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw CsvError("not a number: '" + std::string(field) + "'");
    }
    return v;
}

std::optional<double> parse_optional(std::string_view field) {
    if (field.empty()) return std::nullopt;
    return parse_double(field);
}

std::int64_t parse_int(std::string_view field) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw CsvError("not an integer: '" + std::string(field) + "'");
    }
    return v;
}

std::string sweep_csv(const std::vector<SweepRecord>& records) {
    std::string out = std::string(kSweepHeader) + '\n';
    for (const auto& r : records) {
        out += RowBuilder()
                   .add(r.algorithm)
                   .add(r.scenario)
                   .add(r.detection_rate)
                   .add_uint(r.seed)
                   .add(r.wait_all)
                   .add(r.wait_detected)
                   .add(r.wait_undetected)
                   .add_int(r.episodes)
                   .finish();
    }
    return out;
}

std::vector<SweepRecord> parse_sweep_csv(std::string_view text) {
    std::vector<SweepRecord> out;
    for (const auto& f : parse_table(text, kSweepHeader, 8)) {
        SweepRecord r;
        r.algorithm = f[0];
        r.scenario = f[1];
        r.detection_rate = parse_double(f[2]);
        r.seed = static_cast<std::uint64_t>(parse_int(f[3]));
        r.wait_all = parse_optional(f[4]);
        r.wait_detected = parse_optional(f[5]);
        r.wait_undetected = parse_optional(f[6]);
        r.episodes = static_cast<int>(parse_int(f[7]));
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<SweepSummary> summarize_sweep(const std::vector<SweepRecord>& records) {
    using Key = std::tuple<std::string, std::string, double>;
    struct Acc {
        int seeds = 0;
        std::vector<double> all, detected, undetected;
    };
    std::map<Key, Acc> groups;
    for (const auto& r : records) {
        auto& g = groups[{r.algorithm, r.scenario, r.detection_rate}];
        ++g.seeds;
        if (r.wait_all) g.all.push_back(*r.wait_all);
        if (r.wait_detected) g.detected.push_back(*r.wait_detected);
        if (r.wait_undetected) g.undetected.push_back(*r.wait_undetected);
    }
    std::vector<SweepSummary> out;
    for (const auto& [key, g] : groups) {
        SweepSummary s;
        std::tie(s.algorithm, s.scenario, s.detection_rate) = key;
        s.seeds = g.seeds;
        const auto a = moments(g.all), d = moments(g.detected), u = moments(g.undetected);
        s.wait_all_mean = a.mean;
        s.wait_all_std = a.stddev;
        s.wait_detected_mean = d.mean;
        s.wait_detected_std = d.stddev;
        s.wait_undetected_mean = u.mean;
        s.wait_undetected_std = u.stddev;
        out.push_back(std::move(s));
    }
    return out;
}

std::string sweep_summary_csv(const std::vector<SweepSummary>& rows) {
    std::string out = std::string(kSweepSummaryHeader) + '\n';
    for (const auto& s : rows) {
        out += RowBuilder()
                   .add(s.algorithm)
                   .add(s.scenario)
                   .add(s.detection_rate)
                   .add_int(s.seeds)
                   .add(s.wait_all_mean)
                   .add(s.wait_all_std)
                   .add(s.wait_detected_mean)
                   .add(s.wait_detected_std)
                   .add(s.wait_undetected_mean)
                   .add(s.wait_undetected_std)
                   .finish();
    }
    return out;
}

std::vector<SweepSummary> parse_sweep_summary_csv(std::string_view text) {
    std::vector<SweepSummary> out;
    for (const auto& f : parse_table(text, kSweepSummaryHeader, 10)) {
        SweepSummary s;
        s.algorithm = f[0];
        s.scenario = f[1];
        s.detection_rate = parse_double(f[2]);
        s.seeds = static_cast<int>(parse_int(f[3]));
        s.wait_all_mean = parse_optional(f[4]);
        s.wait_all_std = parse_optional(f[5]);
        s.wait_detected_mean = parse_optional(f[6]);
        s.wait_detected_std = parse_optional(f[7]);
        s.wait_undetected_mean = parse_optional(f[8]);
        s.wait_undetected_std = parse_optional(f[9]);
        out.push_back(std::move(s));
    }
    return out;
}

std::string timeline_csv(const std::vector<adapt::TimelinePoint>& points) {
    std::string out = std::string(kTimelineHeader) + '\n';
    for (const auto& p : points) {
        out += RowBuilder()
                   .add_int(p.step)
                   .add(p.detection_rate)
                   .add(p.wait_all)
                   .add(p.wait_detected)
                   .add(p.wait_undetected)
                   .add_int(p.instability_flag ? 1 : 0)
                   .finish();
    }
    return out;
}

std::vector<adapt::TimelinePoint> parse_timeline_csv(std::string_view text) {
    std::vector<adapt::TimelinePoint> out;
    for (const auto& f : parse_table(text, kTimelineHeader, 6)) {
        adapt::TimelinePoint p;
        p.step = parse_int(f[0]);
        p.detection_rate = parse_double(f[1]);
        p.wait_all = parse_optional(f[2]);
        p.wait_detected = parse_optional(f[3]);
        p.wait_undetected = parse_optional(f[4]);
        const auto flag = parse_int(f[5]);
        if (flag != 0 && flag != 1) throw CsvError("instability_flag must be 0 or 1");
        p.instability_flag = flag == 1;
        out.push_back(p);
    }
    return out;
}

std::string curve_csv(const std::vector<agents::EpisodeRecord>& curve) {
    std::string out = std::string(kCurveHeader) + '\n';
    for (const auto& e : curve) {
        out += RowBuilder()
                   .add_int(e.episode)
                   .add(e.episode_return)
                   .add(e.wait_all)
                   .add(e.wait_detected)
                   .add(e.wait_undetected)
                   .finish();
    }
    return out;
}

std::vector<agents::EpisodeRecord> parse_curve_csv(std::string_view text) {
    std::vector<agents::EpisodeRecord> out;
    for (const auto& f : parse_table(text, kCurveHeader, 5)) {
        agents::EpisodeRecord e;
        e.episode = static_cast<int>(parse_int(f[0]));
        e.episode_return = parse_double(f[1]);
        e.wait_all = parse_optional(f[2]);
        e.wait_detected = parse_optional(f[3]);
        e.wait_undetected = parse_optional(f[4]);
        out.push_back(e);
    }
    return out;
}

std::string instability_csv(const std::vector<InstabilityRecord>& rows) {
    std::string out = std::string(kInstabilityHeader) + '\n';
    for (const auto& r : rows) {
        out += RowBuilder()
                   .add(r.algorithm)
                   .add_uint(r.seed)
                   .add_uint(r.flags)
                   .add_uint(r.points)
                   .add_int(r.updates)
                   .add(r.status)
                   .finish();
    }
    return out;
}

std::vector<InstabilityRecord> parse_instability_csv(std::string_view text) {
    std::vector<InstabilityRecord> out;
    for (const auto& f : parse_table(text, kInstabilityHeader, 6)) {
        InstabilityRecord r;
        r.algorithm = f[0];
        r.seed = static_cast<std::uint64_t>(parse_int(f[1]));
        r.flags = static_cast<std::size_t>(parse_int(f[2]));
        r.points = static_cast<std::size_t>(parse_int(f[3]));
        r.updates = parse_int(f[4]);
        r.status = f[5];
        out.push_back(std::move(r));
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
    const std::filesystem::path p(path);
    std::error_code ec;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace pdsc::harness
