#include "miner/commit_log.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <istream>
#include <memory>
#include <sstream>
#include <unordered_set>

#include "miner/errors.hpp"
#include "miner/text.hpp"

namespace miner {

namespace {

bool is_lower_hex40(std::string_view s) {
    if (s.size() != 40) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
    });
}

// Numstat count field: decimal digits, or "-" for binary files.
std::optional<std::optional<std::uint64_t>> parse_count_field(std::string_view f) {
    if (f == "-") return std::optional<std::uint64_t>{};
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc{} || ptr != f.data() + f.size() || f.empty()) return std::nullopt;
    return std::optional<std::uint64_t>{v};
}

bool needs_quoting(std::string_view path) {
    return path.find_first_of("\t\n\"\\") != std::string_view::npos;
}

std::string quote_path(std::string_view path) {
    std::string out = "\"";
    for (char c : path) {
        switch (c) {
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

std::optional<std::string> unquote_path(std::string_view quoted) {
    if (quoted.size() < 2 || quoted.front() != '"' || quoted.back() != '"') return std::nullopt;
    std::string out;
    for (std::size_t i = 1; i + 1 < quoted.size(); ++i) {
        char c = quoted[i];
        if (c != '\\') {
            out += c;
            continue;
        }
        if (i + 2 >= quoted.size()) return std::nullopt;
        char e = quoted[++i];
        switch (e) {
            case 't': out += '\t'; break;
            case 'n': out += '\n'; break;
            case 'r': out += '\r'; break;
            case '"': out += '"'; break;
            case '\\': out += '\\'; break;
            default: {
                // git uses three-digit octal escapes for raw bytes
                if (e < '0' || e > '7' || i + 2 >= quoted.size()) return std::nullopt;
                int v = e - '0';
                for (int k = 0; k < 2; ++k) {
                    char o = quoted[++i];
                    if (o < '0' || o > '7') return std::nullopt;
                    v = v * 8 + (o - '0');
                }
                out += static_cast<char>(v);
            }
        }
    }
    return out;
}

// Header line: C|<id>|<name>|<email>|<author iso>|<committer iso>|<parents>.
// The name may itself contain '|'; the three trailing fields and the email
// are anchored from the right, the id from the left.
CommitRecord parse_header(std::string_view line, std::size_t lineno) {
    auto tokens = split(line, '|');
    if (tokens.size() < 7)
        throw ParseError(lineno, "malformed commit header: expected 7 '|'-separated fields");
    const std::size_t n = tokens.size();

    CommitRecord rec;
    rec.id = std::string(tokens[1]);
    if (!is_lower_hex40(rec.id))
        throw ParseError(lineno, "commit id must be 40 lowercase hex chars, got \"" + rec.id + "\"");

    std::string name(tokens[2]);
    for (std::size_t i = 3; i + 4 < n; ++i) {
        name += '|';
        name += tokens[i];
    }
    rec.author_name = std::move(name);
    rec.author_email = std::string(tokens[n - 4]);
    try {
        rec.author_time = parse_iso8601_utc(tokens[n - 3]);
        rec.committer_time = parse_iso8601_utc(tokens[n - 2]);
    } catch (const ValidationError& e) {
        throw ParseError(lineno, e.what());
    }
    unsigned parents = 0;
    std::string_view pc = tokens[n - 1];
    auto [ptr, ec] = std::from_chars(pc.data(), pc.data() + pc.size(), parents);
    if (ec != std::errc{} || ptr != pc.data() + pc.size() || pc.empty())
        throw ParseError(lineno, "malformed parent count \"" + std::string(pc) + "\"");
    rec.parent_count = parents;
    return rec;
}

FileDelta parse_numstat(std::string_view line, std::size_t lineno) {
    auto first_tab = line.find('\t');
    auto second_tab = first_tab == std::string_view::npos ? std::string_view::npos
                                                          : line.find('\t', first_tab + 1);
    if (second_tab == std::string_view::npos)
        throw ParseError(lineno, "malformed numstat line: expected <added>\\t<deleted>\\t<path>");

    auto added = parse_count_field(line.substr(0, first_tab));
    auto deleted = parse_count_field(line.substr(first_tab + 1, second_tab - first_tab - 1));
    if (!added || !deleted)
        throw ParseError(lineno, "malformed numstat count in \"" + std::string(line) + "\"");

    std::string_view raw_path = line.substr(second_tab + 1);
    if (raw_path.empty()) throw ParseError(lineno, "numstat line has empty path");
    std::string path;
    if (raw_path.front() == '"') {
        auto unquoted = unquote_path(raw_path);
        if (!unquoted) throw ParseError(lineno, "malformed quoted path in numstat line");
        path = utf8_sanitize(*unquoted);
    } else {
        path = utf8_sanitize(raw_path);
    }
    return FileDelta{std::move(path), *added, *deleted};
}

}  // namespace

std::vector<CommitRecord> parse_commit_log(std::istream& in) {
    std::vector<CommitRecord> commits;
    enum class State { header, message, numstat };
    State state = State::header;
    std::unordered_set<std::string> seen_paths;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();

        switch (state) {
            case State::header:
                if (line.empty()) continue;  // tolerate extra separators
                if (!line.starts_with("C|"))
                    throw ParseError(lineno, "expected commit header line starting with \"C|\"");
                commits.push_back(parse_header(line, lineno));
                state = State::message;
                break;

            case State::message: {
                if (!line.starts_with("M|"))
                    throw ParseError(lineno, "expected message line starting with \"M|\"");
                auto decoded = base64_decode(std::string_view(line).substr(2));
                if (!decoded) throw ParseError(lineno, "message is not valid base64");
                commits.back().message = std::move(*decoded);
                seen_paths.clear();
                state = State::numstat;
                break;
            }

            case State::numstat:
                if (line.empty()) {
                    state = State::header;
                    break;
                }
                if (line.starts_with("C|"))
                    throw ParseError(lineno, "missing blank separator line before next record");
                {
                    FileDelta delta = parse_numstat(line, lineno);
                    auto& deltas = commits.back().file_deltas;
                    deltas.push_back(std::move(delta));
                    if (!seen_paths.insert(deltas.back().path).second)
                        throw ParseError(lineno,
                                         "duplicate path \"" + deltas.back().path + "\" in record");
                }
                break;
        }
    }
    if (state == State::message)
        throw ParseError(lineno, "truncated record at end of input: header without message line");
    return commits;
}

std::vector<CommitRecord> parse_commit_log(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_commit_log(in);
}

std::string serialize_commit_log(const std::vector<CommitRecord>& commits) {
    std::string out;
    for (const CommitRecord& c : commits) {
        out += "C|";
        out += c.id;
        out += '|';
        out += c.author_name;
        out += '|';
        out += c.author_email;
        out += '|';
        out += format_iso8601_utc(c.author_time);
        out += '|';
        out += format_iso8601_utc(c.committer_time);
        out += '|';
        out += std::to_string(c.parent_count);
        out += '\n';
        out += "M|";
        out += base64_encode(c.message);
        out += '\n';
        for (const FileDelta& d : c.file_deltas) {
            out += d.lines_added ? std::to_string(*d.lines_added) : std::string("-");
            out += '\t';
            out += d.lines_deleted ? std::to_string(*d.lines_deleted) : std::string("-");
            out += '\t';
            out += needs_quoting(d.path) ? quote_path(d.path) : d.path;
            out += '\n';
        }
        out += '\n';
    }
    return out;
}

std::vector<CommitRecord> filter_commits(const std::vector<CommitRecord>& commits,
                                         const TimeWindow& w, TimestampSource source) {
    std::vector<CommitRecord> kept;
    kept.reserve(commits.size());
    for (const CommitRecord& c : commits) {
        if (c.is_merge()) continue;
        const Timestamp t = source == TimestampSource::author ? c.author_time : c.committer_time;
        if (window_contains(w, t)) kept.push_back(c);
    }
    return kept;
}

namespace {

bool is_ascii_alnum(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

const std::unordered_set<std::string>& closing_keywords() {
    static const std::unordered_set<std::string> kw = {
        "fix", "fixes", "fixed", "close", "closes", "closed",
        "resolve", "resolves", "resolved"};
    return kw;
}

// Reads the ASCII word ending at position `end` (exclusive); returns it
// lowercased and moves `end` to its start.
std::string word_before(std::string_view s, std::size_t& end) {
    std::size_t b = end;
    while (b > 0 && is_ascii_alpha(s[b - 1])) --b;
    std::string w = to_lower(s.substr(b, end - b));
    end = b;
    return w;
}

bool preceded_by_keyword(std::string_view s, std::size_t hash_pos) {
    std::size_t p = hash_pos;
    while (p > 0 && (s[p - 1] == ' ' || s[p - 1] == '\t')) --p;
    if (p > 0 && s[p - 1] == ':') --p;
    while (p > 0 && (s[p - 1] == ' ' || s[p - 1] == '\t')) --p;
    std::string w = word_before(s, p);
    if (w == "issue") {
        while (p > 0 && (s[p - 1] == ' ' || s[p - 1] == '\t')) --p;
        w = word_before(s, p);
    }
    return closing_keywords().contains(w);
}

}  // namespace

std::set<std::uint64_t> extract_issue_refs(std::string_view message, RefsMode mode) {
    std::set<std::uint64_t> refs;
    for (std::size_t i = 0; i < message.size(); ++i) {
        if (message[i] != '#') continue;
        if (i > 0 && is_ascii_alnum(message[i - 1])) continue;
        std::size_t d = i + 1;
        while (d < message.size() && message[d] >= '0' && message[d] <= '9') ++d;
        if (d == i + 1) continue;
        std::uint64_t value = 0;
        auto [ptr, ec] = std::from_chars(message.data() + i + 1, message.data() + d, value);
        if (ec != std::errc{} || ptr != message.data() + d) continue;  // overflow
        if (value == 0) continue;
        if (mode == RefsMode::keyword && !preceded_by_keyword(message, i)) continue;
        refs.insert(value);
    }
    return refs;
}

namespace {

constexpr char kPrettyTemplate[] = "%x01%H|%an|%ae|%aI|%cI|%P%x02%B%x03";

std::string shell_quote(std::string_view s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    out += '\'';
    return out;
}

bool looks_like_numstat(std::string_view line) {
    auto t1 = line.find('\t');
    if (t1 == 0 || t1 == std::string_view::npos) return false;
    auto t2 = line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos || t2 + 1 >= line.size()) return false;
    auto is_count = [](std::string_view f) {
        if (f == "-") return true;
        return !f.empty() && std::all_of(f.begin(), f.end(),
                                         [](char c) { return c >= '0' && c <= '9'; });
    };
    return is_count(line.substr(0, t1)) && is_count(line.substr(t1 + 1, t2 - t1 - 1));
}

}  // namespace

std::string sentinel_stream_to_dump(std::string_view raw) {
    std::string dump;
    std::size_t pos = 0;
    while (true) {
        std::size_t start = raw.find('\x01', pos);
        if (start == std::string_view::npos) break;
        std::size_t hdr_end = raw.find('\x02', start + 1);
        if (hdr_end == std::string_view::npos)
            throw ValidationError("truncated git log stream: missing message sentinel");
        std::size_t msg_end = raw.find('\x03', hdr_end + 1);
        if (msg_end == std::string_view::npos)
            throw ValidationError("truncated git log stream: unterminated commit message");
        std::size_t next = raw.find('\x01', msg_end + 1);
        std::size_t tail_end = next == std::string_view::npos ? raw.size() : next;

        std::string_view header = raw.substr(start + 1, hdr_end - start - 1);
        std::string_view message = raw.substr(hdr_end + 1, msg_end - hdr_end - 1);
        std::string_view tail = raw.substr(msg_end + 1, tail_end - msg_end - 1);

        auto fields = split(header, '|');
        if (fields.size() < 6)
            throw ValidationError("malformed git log header: \"" + std::string(header) + "\"");
        std::string_view parents = fields[fields.size() - 1];
        unsigned parent_count = 0;
        for (std::string_view tok : split(parents, ' '))
            if (!tok.empty()) ++parent_count;

        dump += "C|";
        dump.append(header.substr(0, header.size() - parents.size()));
        dump += std::to_string(parent_count);
        dump += '\n';
        dump += "M|";
        dump += base64_encode(message);
        dump += '\n';
        for (std::string_view line : split(tail, '\n')) {
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            if (looks_like_numstat(line)) {
                dump.append(line);
                dump += '\n';
            }
        }
        dump += '\n';
        pos = tail_end;
    }
    return dump;
}

std::string dump_command_line(std::string_view repo_path) {
    std::string git = "git -C " + shell_quote(repo_path) +
                      " log --numstat --no-show-signature --encoding=UTF-8 "
                      "--pretty=format:'" +
                      kPrettyTemplate + "'";
    // Same conversion as sentinel_stream_to_dump, for shells without this tool.
    std::string perl =
        "perl -0777 -MMIME::Base64 -ne '"
        "while (/\\x01(.*?)\\x02(.*?)\\x03([^\\x01]*)/gs) {"
        " my ($h, $m, $r) = ($1, $2, $3);"
        " my @f = split /\\|/, $h, -1;"
        " my $p = pop @f;"
        " my $n = scalar(grep { length } split / /, $p);"
        " print join(\"|\", \"C\", @f), \"|$n\\n\";"
        " print \"M|\", encode_base64($m, \"\"), \"\\n\";"
        " for my $l (split /\\n/, $r) { print \"$l\\n\" if $l =~ /^(\\d+|-)\\t(\\d+|-)\\t/; }"
        " print \"\\n\";"
        "}'";
    return git + " | " + perl;
}

std::vector<CommitRecord> read_repository_log(const std::string& repo_path) {
    std::string cmd = "git -C " + shell_quote(repo_path) +
                      " log --numstat --no-show-signature --encoding=UTF-8 "
                      "--pretty=format:'" +
                      kPrettyTemplate + "' 2>/dev/null";
    std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
    if (!pipe) throw IoError("failed to launch git for \"" + repo_path + "\"");
    std::string raw;
    char buf[1 << 14];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe.get())) > 0) raw.append(buf, got);
    const int status = pclose(pipe.release());
    if (status != 0)
        throw IoError("git log failed for repository \"" + repo_path + "\"" +
                      " (exit status " + std::to_string(status) + ")");
    return parse_commit_log(sentinel_stream_to_dump(raw));
}

}  // namespace miner
