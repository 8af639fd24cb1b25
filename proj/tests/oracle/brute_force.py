#!/usr/bin/env python3
"""Independent brute-force recomputation of the fixture metrics.

Reads the bundled fixture files (cohorts.conf, aliases.txt, commit dumps,
snapshots, survey table) with nothing but the Python standard library and
recomputes every reported statistic directly from its definition. The output
freezes tests/fixtures/golden/golden.json, which the acceptance suite compares
against the C++ pipeline.

Regenerate after editing fixtures:

    python3 tests/oracle/brute_force.py tests/fixtures \
        > tests/fixtures/golden/golden.json
"""

import base64
import csv
import json
import math
import re
import statistics
import sys
from datetime import datetime, timedelta, timezone
from pathlib import Path


def parse_time(text):
    return datetime.fromisoformat(text.replace("Z", "+00:00")).astimezone(timezone.utc)


def parse_dump(path):
    commits = []
    lines = path.read_text().splitlines()
    i = 0
    while i < len(lines):
        if not lines[i]:
            i += 1
            continue
        fields = lines[i].split("|")
        assert fields[0] == "C", f"bad header at {path}:{i + 1}"
        commit = {
            "id": fields[1],
            "name": "|".join(fields[2:-4]),
            "email": fields[-4],
            "author_time": parse_time(fields[-3]),
            "committer_time": parse_time(fields[-2]),
            "parents": int(fields[-1]),
            "files": [],
        }
        i += 1
        commit["message"] = base64.b64decode(lines[i][2:]).decode()
        i += 1
        while i < len(lines) and lines[i]:
            added, deleted, file_path = lines[i].split("\t", 2)
            commit["files"].append(
                (file_path, None if added == "-" else int(added),
                 None if deleted == "-" else int(deleted)))
            i += 1
        commits.append(commit)
    return commits


def parse_aliases(path):
    entries = {}
    excluded = set()
    current = None
    for raw in path.read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        directive, _, rest = line.partition(" ")
        rest = rest.strip()
        if directive == "contributor":
            current = rest
            entries.setdefault(current, {"emails": set(), "logins": set(), "exact": set()})
        elif directive == "exclude":
            excluded.add(rest)
        elif directive == "email":
            entries[current]["emails"].add(rest.lower())
        elif directive == "login":
            entries[current]["logins"].add(rest)
        elif directive == "exact":
            name, _, addr = rest.rpartition("<")
            entries[current]["exact"].add((name.strip(), addr.rstrip(">").lower()))
    return entries, excluded


def make_resolver(entries):
    def claim(actor):
        kind, name, email, login = actor
        for canonical, matchers in entries.items():
            if name is not None and email is not None and (name, email.lower()) in matchers["exact"]:
                return canonical
        for canonical, matchers in entries.items():
            if email is not None and email.lower() in matchers["emails"]:
                return canonical
        for canonical, matchers in entries.items():
            if login is not None and login in matchers["logins"]:
                return canonical
        return None

    def resolve(actors):
        binding = {}
        unclaimed = []
        for actor in actors:
            canonical = claim(actor)
            if canonical is not None:
                binding[actor] = canonical
            else:
                unclaimed.append(actor)
        # transitive clustering of the rest by shared email / shared login
        parent = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            parent.setdefault(a, a)
            parent.setdefault(b, b)
            parent[find(a)] = find(b)

        for idx, actor in enumerate(unclaimed):
            node = ("actor", idx)
            parent.setdefault(node, node)
            if actor[2] is not None:
                union(node, ("email", actor[2].lower()))
            if actor[3] is not None:
                union(node, ("login", actor[3]))
        cluster_members = {}
        for idx, actor in enumerate(unclaimed):
            cluster_members.setdefault(find(("actor", idx)), []).append(actor)
        for members in cluster_members.values():
            emails = sorted(a[2].lower() for a in members if a[2] is not None)
            logins = sorted(a[3] for a in members if a[3] is not None)
            canonical = f"email:{emails[0]}" if emails else f"login:{logins[0]}"
            for actor in members:
                binding[actor] = canonical
        return binding

    return resolve


REF_TOKEN = re.compile(r"(?<![0-9A-Za-z])#([0-9]+)")


def issue_refs(message):
    return {int(m) for m in REF_TOKEN.findall(message) if int(m) != 0}


def commit_actor(commit):
    return ("commit", commit["name"], commit["email"], None)


def login_actor(login):
    return ("tracker", None, None, login)


def analyze_cohort(cohort, fixture_dir, resolve, excluded):
    all_commits = []
    all_issues = []
    per_project = []
    for project in cohort["projects"]:
        end = parse_time(project["project_end"])
        start = end - timedelta(days=project.get("window_days", 7))
        cutoff = end - timedelta(hours=project.get("last_minute_hours", 24))

        commits = [
            c for c in parse_dump(fixture_dir / project["repo_source"])
            if c["parents"] <= 1 and start <= c["author_time"] < end
        ]
        snapshot = json.loads((fixture_dir / f"{project['name']}.snapshot.json").read_text())
        issues = [
            i for i in snapshot["issues"]
            if not i["is_pull_request"] and "closed_at" in i
            and start <= parse_time(i["closed_at"]) < end
        ]
        per_project.append((commits, issues, cutoff))
        all_commits += commits
        all_issues += issues

    actors = [commit_actor(c) for c in all_commits]
    for issue in all_issues:
        actors.append(login_actor(issue["opener"]))
        actors.append(login_actor(issue["closer"]))
        for event in issue["events"]:
            if "actor" in event:
                actors.append(login_actor(event["actor"]))
        for comment in issue["comments"]:
            actors.append(login_actor(comment["actor"]))
    binding = resolve(actors)
    active = {binding[a] for a in actors if binding[a] not in excluded}
    n = len(active)
    assert n >= 1, f"cohort {cohort['label']} has no active contributor"

    commit_count = files = last_minute = line_changes = unique_refs = 0
    for commits, _, cutoff in per_project:
        kept = [c for c in commits if binding[commit_actor(c)] not in excluded]
        commit_count += len(kept)
        refs = set()
        for c in kept:
            files += len(c["files"])
            if c["author_time"] > cutoff:
                last_minute += 1
            for _, added, deleted in c["files"]:
                line_changes += (added or 0) + (deleted or 0)
            refs |= issue_refs(c["message"])
        unique_refs += len(refs)

    events = comments = same = 0
    for issue in all_issues:
        events += len(issue["events"])
        comments += len(issue["comments"])
        if binding[login_actor(issue["opener"])] == binding[login_actor(issue["closer"])]:
            same += 1

    bodies = [len(i["body"]) for i in all_issues]
    titles = [len(i["title"]) for i in all_issues]

    def stats(values):
        return {
            "mean": statistics.fmean(values),
            "stdev": statistics.stdev(values) if len(values) > 1 else 0.0,
            "median": float(statistics.median(values)),
        }

    return {
        "label": cohort["label"],
        "kanban": cohort.get("kanban_flag", False),
        "contributor_count": n,
        "totals": {
            "commits": commit_count,
            "touched_files": files,
            "last_minute": last_minute,
            "line_changes": line_changes,
            "unique_refs": unique_refs,
            "issues": len(all_issues),
            "events": events,
            "comments": comments,
            "same_open_close": same,
        },
        "commit": {
            "commit_amount": commit_count / n,
            "touched_files": files / n,
            "last_minute_commits": last_minute / n,
            "line_changes_per_commit": line_changes / commit_count if commit_count else 0.0,
            "unique_issues_referenced": unique_refs / n,
        },
        "issue": {
            "issue_amount": len(all_issues) / n,
            "issue_events": events / n,
            "issue_comments": comments / n,
            "pct_same_open_close": 100.0 * same / len(all_issues) if all_issues else 0.0,
        },
        "text": {"body": stats(bodies), "title": stats(titles)} if all_issues else None,
    }


def quantile(values, p):
    ordered = sorted(values)
    position = p * (len(ordered) - 1)
    lower = math.floor(position)
    upper = math.ceil(position)
    if lower == upper:
        return float(ordered[lower])
    return ordered[lower] * (upper - position) + ordered[upper] * (position - lower)


def analyze_survey(fixture_dir):
    config = json.loads((fixture_dir / "survey.csv.questions.json").read_text())
    with open(fixture_dir / "survey.csv", newline="") as handle:
        rows = list(csv.reader(handle, delimiter=config.get("delimiter", ",")))
    if config.get("has_header"):
        rows = rows[1:]

    likert = {}
    boxplot = {}
    choice = {}
    for question in config["questions"]:
        column = question["column"]
        cells = [row[column].strip() if column < len(row) else "" for row in rows]
        if question["kind"] == "likert":
            values = [int(cell) for cell in cells if cell]
            k = math.floor(0.10 * len(values))
            ordered = sorted(values)
            trimmed = ordered[k:len(ordered) - k] if k else ordered
            likert[question["id"]] = {
                "n": len(values),
                "mean": statistics.fmean(values),
                "stdev": statistics.stdev(values) if len(values) > 1 else 0.0,
                "trimmed_mean_10": statistics.fmean(trimmed),
                "median": float(statistics.median(values)),
                "range": float(max(values) - min(values)),
            }
            q1, q3 = quantile(values, 0.25), quantile(values, 0.75)
            low_fence, high_fence = q1 - 1.5 * (q3 - q1), q3 + 1.5 * (q3 - q1)
            inside = [v for v in values if low_fence <= v <= high_fence]
            boxplot[question["id"]] = {
                "q1": q1,
                "median": quantile(values, 0.5),
                "q3": q3,
                "whisker_low": float(min(inside)),
                "whisker_high": float(max(inside)),
                "outliers": sorted(float(v) for v in values if not low_fence <= v <= high_fence),
                "mean": statistics.fmean(values),
            }
        elif question["kind"] == "choice":
            counts = {option: 0 for option in question["options"]}
            for cell in cells:
                for token in filter(None, (t.strip() for t in cell.split(";"))):
                    counts[token] += 1
            choice[question["id"]] = {"counts": counts, "respondents": len(rows)}
    return {"likert": likert, "boxplot": boxplot, "choice": choice}


def main():
    fixture_dir = Path(sys.argv[1] if len(sys.argv) > 1 else "tests/fixtures")
    config = json.loads((fixture_dir / "cohorts.conf").read_text())
    entries, excluded = parse_aliases(fixture_dir / config["alias_map"])
    resolve = make_resolver(entries)

    golden = {
        "cohorts": [
            analyze_cohort(cohort, fixture_dir, resolve, excluded)
            for cohort in config["cohorts"]
        ],
        "survey": analyze_survey(fixture_dir),
    }
    json.dump(golden, sys.stdout, indent=2, sort_keys=True)
    print()


if __name__ == "__main__":
    main()
