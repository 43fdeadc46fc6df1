#include "egolayers/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>

#include <json.hpp>

namespace egolayers {

namespace {

std::string lower_ascii(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// Returns nullopt for unrecognized spellings.
std::optional<bool> parse_bool(const std::string& raw) {
    const std::string s = lower_ascii(raw);
    if (s.empty() || s == "0" || s == "false" || s == "no") return false;
    if (s == "1" || s == "true" || s == "yes") return true;
    return std::nullopt;
}

struct RawRecord {
    std::optional<std::string> id, source, target, timestamp, text, anonymous;
    std::optional<std::string> label_update, label_targeted;
};

class CsvLayout {
  public:
    CsvLayout(const IngestConfig& config, const std::optional<std::string>& header_line) {
        const auto& f = config.fields;
        if (config.header) {
            if (!header_line) throw DataError("csv input is missing its header row");
            const auto cols = split_delimited(*header_line, config.delimiter);
            for (std::size_t i = 0; i < cols.size(); ++i) index_[cols[i]] = static_cast<int>(i);
        } else {
            for (const auto& [name, idx] : config.column_indices) index_[name] = idx;
        }
        id_ = find(f.id);
        source_ = find(f.source);
        target_ = find(f.target);
        timestamp_ = find(f.timestamp);
        text_ = find(f.text);
        anonymous_ = find(f.anonymous);
        label_update_ = find(f.label_update);
        label_targeted_ = find(f.label_targeted);
        if (source_ < 0 || target_ < 0 || timestamp_ < 0) {
            throw DataError("csv input must provide source, target and timestamp columns");
        }
    }

    RawRecord extract(const std::vector<std::string>& cols) const {
        RawRecord r;
        auto get = [&](int idx) -> std::optional<std::string> {
            if (idx < 0 || idx >= static_cast<int>(cols.size())) return std::nullopt;
            return cols[idx];
        };
        r.id = get(id_);
        r.source = get(source_);
        r.target = get(target_);
        r.timestamp = get(timestamp_);
        r.text = get(text_);
        r.anonymous = get(anonymous_);
        r.label_update = get(label_update_);
        r.label_targeted = get(label_targeted_);
        return r;
    }

  private:
    int find(const std::string& name) const {
        auto it = index_.find(name);
        return it == index_.end() ? -1 : it->second;
    }
    std::unordered_map<std::string, int> index_;
    int id_, source_, target_, timestamp_, text_, anonymous_, label_update_, label_targeted_;
};

RawRecord extract_json(const nlohmann::json& j, const FieldNames& f) {
    RawRecord r;
    auto get = [&](const std::string& key) -> std::optional<std::string> {
        auto it = j.find(key);
        if (it == j.end() || it->is_null()) return std::nullopt;
        if (it->is_string()) return it->get<std::string>();
        if (it->is_boolean()) return std::string(it->get<bool>() ? "true" : "false");
        if (it->is_number_integer()) return std::to_string(it->get<std::int64_t>());
        if (it->is_number()) return std::to_string(it->get<double>());
        return std::nullopt;
    };
    r.id = get(f.id);
    r.source = get(f.source);
    r.target = get(f.target);
    r.timestamp = get(f.timestamp);
    r.text = get(f.text);
    r.anonymous = get(f.anonymous);
    r.label_update = get(f.label_update);
    r.label_targeted = get(f.label_targeted);
    return r;
}

}  // namespace

std::vector<std::string> split_delimited(const std::string& line, char delimiter) {
    std::vector<std::string> cols;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == delimiter) {
            cols.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r' || i + 1 != line.size()) {
            cur += c;
        }
    }
    cols.push_back(std::move(cur));
    return cols;
}

IngestStats for_each_event(std::istream& in, const IngestConfig& config,
                           const std::function<void(InteractionEvent&&)>& sink) {
    IngestStats stats;
    std::string line;
    std::optional<CsvLayout> layout;

    if (config.format == InputFormat::csv && config.header) {
        if (std::getline(in, line)) {
            layout.emplace(config, line);
        } else {
            return stats;  // empty input, all counts 0
        }
    } else if (config.format == InputFormat::csv) {
        layout.emplace(config, std::nullopt);
    }

    std::int64_t ordinal = 0;
    auto malformed = [&](const char* why) {
        if (config.policy == ParsePolicy::strict) {
            throw DataError(std::string("malformed record at index ") +
                            std::to_string(ordinal - 1) + ": " + why);
        }
        ++stats.malformed_dropped;
    };

    while (std::getline(in, line)) {
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        const std::int64_t record_ordinal = ordinal++;
        ++stats.total_records;

        RawRecord raw;
        bool parsed = true;
        if (config.format == InputFormat::csv) {
            raw = layout->extract(split_delimited(line, config.delimiter));
        } else {
            nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.is_object()) {
                parsed = false;
            } else {
                raw = extract_json(j, config.fields);
            }
        }

        if (!parsed) {
            malformed("unparseable json record");
            continue;
        }

        bool anonymous = false;
        if (raw.anonymous && !raw.anonymous->empty()) {
            const auto b = parse_bool(*raw.anonymous);
            if (!b) {
                malformed("unrecognized anonymous flag");
                continue;
            }
            anonymous = *b;
        }
        if (anonymous) {
            ++stats.anonymous_dropped;
            continue;
        }

        if (!raw.source || raw.source->empty() || !raw.target || raw.target->empty()) {
            malformed("missing source or target id");
            continue;
        }
        if (!raw.timestamp || raw.timestamp->empty()) {
            malformed("missing timestamp");
            continue;
        }
        const auto ts = parse_timestamp(*raw.timestamp, config.timestamp_format);
        if (!ts) {
            malformed("unparseable timestamp");
            continue;
        }

        InteractionEvent ev;
        ev.event_id = record_ordinal;
        if (raw.id && !raw.id->empty()) {
            std::int64_t v = 0;
            const auto [p, ec] = std::from_chars(raw.id->data(), raw.id->data() + raw.id->size(), v);
            if (ec != std::errc{} || p != raw.id->data() + raw.id->size()) {
                malformed("non-integer id");
                continue;
            }
            ev.event_id = v;
        }
        ev.source_id = *raw.source;
        ev.target_id = *raw.target;
        ev.timestamp = *ts;
        if (raw.text && !raw.text->empty()) ev.text = *raw.text;
        if (raw.label_update && raw.label_targeted && !raw.label_update->empty() &&
            !raw.label_targeted->empty()) {
            const auto u = parse_bool(*raw.label_update);
            const auto t = parse_bool(*raw.label_targeted);
            if (!u || !t) {
                malformed("unrecognized label flag");
                continue;
            }
            ev.label = ReviewLabel{*u, *t};
        }

        ++stats.accepted;
        sink(std::move(ev));
    }
    return stats;
}

std::pair<std::vector<InteractionEvent>, IngestStats> parse_events(std::istream& in,
                                                                   const IngestConfig& config) {
    std::vector<InteractionEvent> events;
    IngestStats stats =
        for_each_event(in, config, [&](InteractionEvent&& ev) { events.push_back(std::move(ev)); });
    return {std::move(events), stats};
}

std::string IngestStats::to_json() const {
    nlohmann::json j{{"total_records", total_records},
                     {"accepted", accepted},
                     {"anonymous_dropped", anonymous_dropped},
                     {"malformed_dropped", malformed_dropped}};
    return j.dump();
}

RelationshipAccumulator::RelationshipAccumulator(double days_per_month)
    : days_per_month_(days_per_month) {}

void RelationshipAccumulator::add(const InteractionEvent& event) {
    std::string key;
    key.reserve(event.source_id.size() + event.target_id.size() + 1);
    key.append(event.source_id);
    key.push_back('\x1f');
    key.append(event.target_id);

    auto [it, inserted] = pairs_.try_emplace(std::move(key));
    PairAgg& agg = it->second;
    if (inserted) {
        agg = {1, event.timestamp, event.timestamp};
    } else {
        ++agg.count;
        agg.first_ts = std::min(agg.first_ts, event.timestamp);
        agg.last_ts = std::max(agg.last_ts, event.timestamp);
    }
    ++total_events_;
}

void RelationshipAccumulator::merge(RelationshipAccumulator&& other) {
    for (auto& [key, agg] : other.pairs_) {
        auto [it, inserted] = pairs_.try_emplace(key, agg);
        if (!inserted) {
            it->second.count += agg.count;
            it->second.first_ts = std::min(it->second.first_ts, agg.first_ts);
            it->second.last_ts = std::max(it->second.last_ts, agg.last_ts);
        }
    }
    total_events_ += other.total_events_;
    other.pairs_.clear();
    other.total_events_ = 0;
}

std::vector<Relationship> RelationshipAccumulator::finish() && {
    std::vector<Relationship> out;
    out.reserve(pairs_.size());
    for (auto& [key, agg] : pairs_) {
        const auto sep = key.find('\x1f');
        Relationship r;
        r.source_id = key.substr(0, sep);
        r.target_id = key.substr(sep + 1);
        r.event_count = agg.count;
        r.first_ts = agg.first_ts;
        r.last_ts = agg.last_ts;
        r.duration_months = months_between(r.first_ts, r.last_ts, days_per_month_);
        r.contact_frequency =
            r.duration_months > 0.0 ? static_cast<double>(r.event_count) / r.duration_months : 0.0;
        out.push_back(std::move(r));
    }
    pairs_.clear();
    std::sort(out.begin(), out.end(), [](const Relationship& a, const Relationship& b) {
        if (a.source_id != b.source_id) return a.source_id < b.source_id;
        return a.target_id < b.target_id;
    });
    return out;
}

std::vector<Relationship> build_relationships(const std::vector<InteractionEvent>& events,
                                              double days_per_month) {
    RelationshipAccumulator acc(days_per_month);
    for (const auto& ev : events) acc.add(ev);
    return std::move(acc).finish();
}

std::vector<Relationship> filter_relationships(std::vector<Relationship> relationships) {
    std::erase_if(relationships, [](const Relationship& r) {
        return r.event_count < 2 || r.duration_months < 1.0;
    });
    return relationships;
}

namespace {

void write_field(std::ostream& out, const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        out << s;
        return;
    }
    out << '"';
    for (char c : s) {
        if (c == '"') out << '"';
        out << c;
    }
    out << '"';
}

}  // namespace

void write_edge_list(std::ostream& out, const std::vector<Relationship>& relationships) {
    out << "source,target,event_count,first_ts,last_ts,contact_frequency\n";
    char freq[32];
    for (const auto& r : relationships) {
        write_field(out, r.source_id);
        out << ',';
        write_field(out, r.target_id);
        std::snprintf(freq, sizeof(freq), "%.6f", r.contact_frequency);
        out << ',' << r.event_count << ',' << format_iso8601(r.first_ts) << ','
            << format_iso8601(r.last_ts) << ',' << freq << '\n';
    }
}

std::vector<Relationship> read_edge_list(std::istream& in, double days_per_month) {
    std::vector<Relationship> out;
    std::string line;
    if (!std::getline(in, line)) return out;  // header
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        const auto cols = split_delimited(line, ',');
        if (cols.size() != 6) {
            throw DataError("edge list line " + std::to_string(lineno) + ": expected 6 columns");
        }
        Relationship r;
        r.source_id = cols[0];
        r.target_id = cols[1];
        std::int64_t count = 0;
        const auto [p, ec] = std::from_chars(cols[2].data(), cols[2].data() + cols[2].size(), count);
        const auto first = parse_iso8601(cols[3]);
        const auto last = parse_iso8601(cols[4]);
        if (ec != std::errc{} || p != cols[2].data() + cols[2].size() || !first || !last) {
            throw DataError("edge list line " + std::to_string(lineno) + ": malformed fields");
        }
        r.event_count = count;
        r.first_ts = *first;
        r.last_ts = *last;
        r.duration_months = months_between(r.first_ts, r.last_ts, days_per_month);
        r.contact_frequency =
            r.duration_months > 0.0 ? static_cast<double>(r.event_count) / r.duration_months : 0.0;
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace egolayers
