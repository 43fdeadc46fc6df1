#include "egolayers/reviewtypes.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <istream>
#include <sstream>

#include <json.hpp>

namespace egolayers {

LexiconConfig LexiconConfig::defaults() {
    LexiconConfig c;
    c.update_patterns = {"update soon",    "please update", "can't wait for",
                         "continue",       "more chapters", "next chapter"};
    c.targeted_patterns = {"character", "plot",  "grammar", "dialogue",
                           "pacing",    "describe", "scene"};
    c.chapter_number_rule = true;
    return c;
}

namespace {

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool contains_any(const std::string& haystack, const std::vector<std::string>& patterns) {
    for (const auto& p : patterns) {
        if (!p.empty() && haystack.find(lower_ascii(p)) != std::string::npos) return true;
    }
    return false;
}

// "chapter <number>" counts as targeted only when commentary follows the
// number (some letter later in the text), so bare "can't wait for chapter 12"
// stays non-targeted.
bool chapter_number_with_commentary(const std::string& text) {
    std::size_t pos = 0;
    while ((pos = text.find("chapter", pos)) != std::string::npos) {
        std::size_t i = pos + 7;
        while (i < text.size() && text[i] == ' ') ++i;
        std::size_t digits = i;
        while (digits < text.size() && std::isdigit(static_cast<unsigned char>(text[digits]))) {
            ++digits;
        }
        if (digits > i) {
            for (std::size_t j = digits; j < text.size(); ++j) {
                if (std::isalpha(static_cast<unsigned char>(text[j]))) return true;
            }
        }
        pos += 7;
    }
    return false;
}

}  // namespace

ReviewLabel classify_review_heuristic(std::string_view text, const LexiconConfig& lexicons) {
    ReviewLabel label;
    if (text.empty()) return label;
    const std::string lowered = lower_ascii(text);
    label.update_encouragement = contains_any(lowered, lexicons.update_patterns);
    label.targeted = contains_any(lowered, lexicons.targeted_patterns);
    if (!label.targeted && lexicons.chapter_number_rule) {
        label.targeted = chapter_number_with_commentary(lowered);
    }
    return label;
}

namespace {

std::optional<bool> parse_bool_flag(const std::string& raw) {
    const std::string s = lower_ascii(raw);
    if (s == "0" || s == "false") return false;
    if (s == "1" || s == "true") return true;
    return std::nullopt;
}

}  // namespace

LabelLoadResult load_labels(std::istream& in, char delimiter, ParsePolicy policy) {
    LabelLoadResult out;
    std::string line;
    if (!std::getline(in, line)) return out;  // empty file -> empty map

    const auto header = split_delimited(line, delimiter);
    int id_col = -1, update_col = -1, targeted_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "event_id") id_col = static_cast<int>(i);
        if (header[i] == "update_encouragement") update_col = static_cast<int>(i);
        if (header[i] == "targeted") targeted_col = static_cast<int>(i);
    }
    if (id_col < 0 || update_col < 0 || targeted_col < 0) {
        throw DataError(
            "label file must have header columns event_id, update_encouragement, targeted");
    }

    std::size_t lineno = 1;
    auto malformed = [&]() {
        if (policy == ParsePolicy::strict) {
            throw DataError("malformed label record at line " + std::to_string(lineno));
        }
        ++out.malformed_dropped;
    };

    const int max_col = std::max({id_col, update_col, targeted_col});
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        const auto cols = split_delimited(line, delimiter);
        if (static_cast<int>(cols.size()) <= max_col) {
            malformed();
            continue;
        }
        std::int64_t id = 0;
        const auto& ids = cols[id_col];
        const auto [p, ec] = std::from_chars(ids.data(), ids.data() + ids.size(), id);
        const auto u = parse_bool_flag(cols[update_col]);
        const auto t = parse_bool_flag(cols[targeted_col]);
        if (ec != std::errc{} || p != ids.data() + ids.size() || !u || !t) {
            malformed();
            continue;
        }
        const auto [it, inserted] = out.labels.insert_or_assign(id, ReviewLabel{*u, *t});
        if (!inserted) ++out.duplicate_warnings;
    }
    return out;
}

std::optional<double> LayerCell::update_pct() const {
    if (total == 0) return std::nullopt;
    return 100.0 * static_cast<double>(update_count) / static_cast<double>(total);
}

std::optional<double> LayerCell::targeted_pct() const {
    if (total == 0) return std::nullopt;
    return 100.0 * static_cast<double>(targeted_count) / static_cast<double>(total);
}

std::int64_t LayerCrosstab::attributed_total() const {
    std::int64_t sum = unassigned + unlabeled;
    for (const auto& cell : layers) sum += cell.total;
    return sum;
}

std::string LayerCrosstab::to_json(int indent) const {
    nlohmann::json j;
    j["k"] = k;
    j["direction"] = egolayers::to_string(direction);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& cell : layers) {
        nlohmann::json row{{"total", cell.total},
                           {"update_count", cell.update_count},
                           {"targeted_count", cell.targeted_count}};
        if (const auto p = cell.update_pct()) {
            row["update_pct"] = *p;
        } else {
            row["update_pct"] = nullptr;
        }
        if (const auto p = cell.targeted_pct()) {
            row["targeted_pct"] = *p;
        } else {
            row["targeted_pct"] = nullptr;
        }
        rows.push_back(row);
    }
    j["layers"] = rows;
    j["unlabeled"] = unlabeled;
    j["unassigned"] = unassigned;
    return j.dump(indent);
}

std::string LayerCrosstab::to_text() const {
    std::ostringstream out;
    char buf[128];
    out << "Review types by layer (" << egolayers::to_string(direction) << ", k = " << k << ")\n";
    out << "  Layer                  ";
    for (int l = 0; l < k; ++l) {
        std::snprintf(buf, sizeof(buf), "%22d", l);
        out << buf;
    }
    auto row = [&](const char* name, auto count_of, auto pct_of) {
        out << "\n  " << name;
        for (const auto& cell : layers) {
            const auto pct = pct_of(cell);
            if (pct) {
                std::snprintf(buf, sizeof(buf), "%14lld (%5.1f%%)",
                              static_cast<long long>(count_of(cell)), *pct);
            } else {
                std::snprintf(buf, sizeof(buf), "%14lld (  n/a)",
                              static_cast<long long>(count_of(cell)));
            }
            out << buf;
        }
    };
    row("Update encouragement ", [](const LayerCell& c) { return c.update_count; },
        [](const LayerCell& c) { return c.update_pct(); });
    row("Targeted             ", [](const LayerCell& c) { return c.targeted_count; },
        [](const LayerCell& c) { return c.targeted_pct(); });
    out << "\n  Labeled totals       ";
    for (const auto& cell : layers) {
        std::snprintf(buf, sizeof(buf), "%22lld", static_cast<long long>(cell.total));
        out << buf;
    }
    out << "\n  unlabeled: " << unlabeled << "   unassigned: " << unassigned << "\n";
    return out.str();
}

CrosstabBuilder::CrosstabBuilder(int k, Direction direction, UnlabeledPolicy policy)
    : k_(k), direction_(direction), policy_(policy) {
    if (k < 1) throw std::invalid_argument("crosstab k must be >= 1");
    tab_.k = k;
    tab_.direction = direction;
    tab_.layers.resize(k);
}

void CrosstabBuilder::add_assignment(const LayerAssignment& assignment) {
    if (assignment.k != k_) {
        throw std::invalid_argument("all layer assignments must use the crosstab's fixed k");
    }
    for (int l = 0; l < assignment.k; ++l) {
        for (const auto& alter : assignment.layers[l].alter_ids) {
            std::string key;
            key.reserve(assignment.ego_id.size() + alter.size() + 1);
            key.append(assignment.ego_id);
            key.push_back('\x1f');
            key.append(alter);
            layer_of_[std::move(key)] = l;
        }
    }
}

void CrosstabBuilder::add_event(const InteractionEvent& event,
                                const std::optional<ReviewLabel>& label) {
    const std::string& ego = direction_ == Direction::outgoing ? event.source_id : event.target_id;
    const std::string& alter = direction_ == Direction::outgoing ? event.target_id : event.source_id;
    std::string key;
    key.reserve(ego.size() + alter.size() + 1);
    key.append(ego);
    key.push_back('\x1f');
    key.append(alter);
    const auto it = layer_of_.find(key);
    if (it == layer_of_.end()) {
        ++tab_.unassigned;
        return;
    }
    LayerCell& cell = tab_.layers[it->second];
    if (!label) {
        ++tab_.unlabeled;
        if (policy_ == UnlabeledPolicy::in_denominator) ++cell.total;
        return;
    }
    ++cell.total;
    if (label->update_encouragement) ++cell.update_count;
    if (label->targeted) ++cell.targeted_count;
}

void CrosstabBuilder::merge(const CrosstabBuilder& other) {
    if (other.k_ != k_ || other.direction_ != direction_ || other.policy_ != policy_) {
        throw std::invalid_argument("cannot merge crosstab builders with different settings");
    }
    for (std::size_t l = 0; l < tab_.layers.size(); ++l) {
        tab_.layers[l].total += other.tab_.layers[l].total;
        tab_.layers[l].update_count += other.tab_.layers[l].update_count;
        tab_.layers[l].targeted_count += other.tab_.layers[l].targeted_count;
    }
    tab_.unlabeled += other.tab_.unlabeled;
    tab_.unassigned += other.tab_.unassigned;
}

LayerCrosstab CrosstabBuilder::finish() const { return tab_; }

LayerCrosstab layer_review_crosstab(const std::vector<InteractionEvent>& events,
                                    const std::unordered_map<std::int64_t, ReviewLabel>& labels,
                                    const std::vector<LayerAssignment>& assignments,
                                    Direction direction, UnlabeledPolicy policy) {
    if (assignments.empty()) throw std::invalid_argument("no layer assignments supplied");
    CrosstabBuilder builder(assignments.front().k, direction, policy);
    for (const auto& a : assignments) builder.add_assignment(a);
    for (const auto& ev : events) {
        std::optional<ReviewLabel> label;
        const auto it = labels.find(ev.event_id);
        if (it != labels.end()) {
            label = it->second;
        } else if (ev.label) {
            label = ev.label;
        }
        builder.add_event(ev, label);
    }
    return builder.finish();
}

}  // namespace egolayers
