#include "miner/time.hpp"

#include <cctype>
#include <charconv>

#include "miner/errors.hpp"

namespace miner {

namespace {

bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

[[noreturn]] void bad(std::string_view text, const char* why) {
    throw ValidationError("invalid ISO-8601 timestamp \"" + std::string(text) + "\": " + why);
}

}  // namespace

Timestamp parse_iso8601_utc(std::string_view text) {
    using namespace std::chrono;

    std::string_view s = text;
    if (s.size() < 19) bad(text, "too short");

    int y, mo, d, h, mi, sec;
    if (!parse_int(s.substr(0, 4), y) || s[4] != '-' || !parse_int(s.substr(5, 2), mo) ||
        s[7] != '-' || !parse_int(s.substr(8, 2), d))
        bad(text, "malformed date");
    if (s[10] != 'T' && s[10] != ' ') bad(text, "expected 'T' between date and time");
    if (!parse_int(s.substr(11, 2), h) || s[13] != ':' || !parse_int(s.substr(14, 2), mi) ||
        s[16] != ':' || !parse_int(s.substr(17, 2), sec))
        bad(text, "malformed time");

    std::size_t pos = 19;
    if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
        ++pos;
        std::size_t digits = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            ++pos;
            ++digits;
        }
        if (digits == 0) bad(text, "empty fractional seconds");
    }

    seconds offset{0};
    if (pos == s.size()) {
        bad(text, "missing UTC offset designator");
    } else if (s[pos] == 'Z' || s[pos] == 'z') {
        ++pos;
    } else if (s[pos] == '+' || s[pos] == '-') {
        int sign = s[pos] == '+' ? 1 : -1;
        ++pos;
        std::string_view rest = s.substr(pos);
        int oh = 0, om = 0;
        if (rest.size() == 5 && rest[2] == ':') {
            if (!parse_int(rest.substr(0, 2), oh) || !parse_int(rest.substr(3, 2), om))
                bad(text, "malformed offset");
        } else if (rest.size() == 4) {
            if (!parse_int(rest.substr(0, 2), oh) || !parse_int(rest.substr(2, 2), om))
                bad(text, "malformed offset");
        } else if (rest.size() == 2) {
            if (!parse_int(rest, oh)) bad(text, "malformed offset");
        } else {
            bad(text, "malformed offset");
        }
        if (oh > 23 || om > 59) bad(text, "offset out of range");
        offset = sign * (hours{oh} + minutes{om});
        pos = s.size();
    } else {
        bad(text, "unexpected trailing characters");
    }
    if (pos != s.size()) bad(text, "unexpected trailing characters");

    if (mo < 1 || mo > 12) bad(text, "month out of range");
    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) bad(text, "no such calendar day");
    if (h > 23 || mi > 59 || sec > 60) bad(text, "time of day out of range");
    if (sec == 60) sec = 59;  // fold leap seconds

    sys_days date{ymd};
    Timestamp local = date + hours{h} + minutes{mi} + seconds{sec};
    return local - offset;
}

std::string format_iso8601_utc(Timestamp t) {
    using namespace std::chrono;
    sys_days date = floor<days>(t);
    year_month_day ymd{date};
    hh_mm_ss tod{t - date};

    char buf[48];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ldZ", int{ymd.year()},
                  unsigned{ymd.month()}, unsigned{ymd.day()},
                  static_cast<long>(tod.hours().count()),
                  static_cast<long>(tod.minutes().count()),
                  static_cast<long>(tod.seconds().count()));
    return buf;
}

TimeWindow::TimeWindow(Timestamp start, Timestamp end) : start_(start), end_(end) {
    if (!(start < end))
        throw ValidationError("time window start (" + format_iso8601_utc(start) +
                              ") must precede end (" + format_iso8601_utc(end) + ")");
}

TimeWindow window_from_project_end(Timestamp end, int days) {
    if (days < 1) throw ValidationError("window length must be at least one day");
    return TimeWindow(end - std::chrono::hours{24} * days, end);
}

bool window_contains(const TimeWindow& w, Timestamp t) {
    return w.start() <= t && t < w.end();
}

}  // namespace miner
