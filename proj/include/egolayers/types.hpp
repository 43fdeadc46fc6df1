#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace egolayers {

// Mean Gregorian month; the toolkit's month convention throughout.
inline constexpr double kDefaultDaysPerMonth = 30.44;
inline constexpr std::int64_t kSecondsPerDay = 86400;

enum class Direction { outgoing, incoming };

std::string to_string(Direction d);
Direction direction_from_string(const std::string& s);

/// Non-exclusive review category flags.
struct ReviewLabel {
    bool update_encouragement = false;
    bool targeted = false;

    bool operator==(const ReviewLabel&) const = default;
};

/// One review event as parsed from the raw log.
struct InteractionEvent {
    std::int64_t event_id = -1;  // explicit id column, or 0-based record ordinal
    std::string source_id;       // reviewer
    std::string target_id;       // author
    std::int64_t timestamp = 0;  // unix seconds
    std::optional<std::string> text;
    std::optional<ReviewLabel> label;
    bool anonymous = false;
};

/// Aggregated directed edge between a (source, target) pair.
struct Relationship {
    std::string source_id;
    std::string target_id;
    std::int64_t event_count = 0;
    std::int64_t first_ts = 0;
    std::int64_t last_ts = 0;
    double duration_months = 0.0;
    double contact_frequency = 0.0;  // events per month; defined when duration > 0
};

inline double months_between(std::int64_t first_ts, std::int64_t last_ts,
                             double days_per_month = kDefaultDaysPerMonth) {
    const double days =
        static_cast<double>(last_ts - first_ts) / static_cast<double>(kSecondsPerDay);
    return days / days_per_month;
}

/// Bad run configuration or usage (exit code 1).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unusable input data (exit code 2).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Broken internal invariant (exit code 3).
struct InvariantError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace egolayers
