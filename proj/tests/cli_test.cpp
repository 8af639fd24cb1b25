#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "miner/commit_log.hpp"

namespace miner {
namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
}

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    static int counter = 0;
    const fs::path base = fs::temp_directory_path() / ("cohort-miner-test-" +
                                                       std::to_string(getpid()) + "-" +
                                                       std::to_string(counter++));
    const fs::path out_path = base.string() + ".out";
    const fs::path err_path = base.string() + ".err";
    const std::string command = env_prefix + (env_prefix.empty() ? "" : " ") +
                                std::string(COHORT_MINER_BINARY) + " " + args + " > " +
                                out_path.string() + " 2> " + err_path.string();
    const int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    fs::remove(out_path);
    fs::remove(err_path);
    return result;
}

const std::string kFixtures = FIXTURE_DIR;

TEST(Cli, NoArgumentsPrintsUsageAndExits1) {
    const RunResult r = run_cli("");
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.err.find("Usage"), std::string::npos);
    EXPECT_TRUE(r.out.empty());
}

TEST(Cli, UnknownSubcommandExits1) {
    const RunResult r = run_cli("frobnicate");
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST(Cli, CompareMatchesGoldenCsv) {
    const RunResult r = run_cli("--config " + kFixtures + "/cohorts.conf compare --format csv");
    EXPECT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(r.out, slurp(kFixtures + "/golden/compare.csv"));
}

TEST(Cli, CompareMatchesGoldenMarkdownAndMachine) {
    for (const char* format : {"markdown", "machine"}) {
        const RunResult r =
            run_cli("--config " + kFixtures + "/cohorts.conf compare --format " + format);
        EXPECT_EQ(r.exit_code, 0) << r.err;
        EXPECT_EQ(r.out, slurp(kFixtures + "/golden/compare." + std::string(format)));
    }
}

TEST(Cli, RunsAreByteIdentical) {
    const std::string args = "--config " + kFixtures + "/cohorts.conf compare --format machine";
    const RunResult first = run_cli(args);
    const RunResult second = run_cli(args);
    EXPECT_EQ(first.exit_code, 0);
    EXPECT_EQ(first.out, second.out);
}

TEST(Cli, OutputIndependentOfThreadCount) {
    const std::string args = "--config " + kFixtures + "/cohorts.conf compare --format machine";
    const RunResult one = run_cli(args, "OMP_NUM_THREADS=1");
    const RunResult four = run_cli(args, "OMP_NUM_THREADS=4");
    EXPECT_EQ(one.exit_code, 0);
    EXPECT_EQ(four.exit_code, 0);
    EXPECT_EQ(one.out, four.out);
}

TEST(Cli, AnalyzeSingleCohort) {
    const RunResult r = run_cli("--config " + kFixtures + "/cohorts.conf analyze 2024/25");
    EXPECT_EQ(r.exit_code, 0) << r.err;
    EXPECT_NE(r.out.find("2024/25* | 2.0 | 2.5 | 0.5 | 7.8 | 1.5"), std::string::npos) << r.out;
    EXPECT_EQ(r.out.find("2023/24"), std::string::npos);
}

TEST(Cli, AnalyzeUnknownCohortExits1) {
    const RunResult r = run_cli("--config " + kFixtures + "/cohorts.conf analyze 1999/00");
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.err.find("1999/00"), std::string::npos);
}

TEST(Cli, EmptyWindowDiagnosticNamesTheCohort) {
    const fs::path dir = fs::temp_directory_path() / "cohort-miner-emptywin";
    fs::create_directories(dir);
    // a window long before any fixture activity
    spit(dir / "cohorts.conf", R"({
      "snapshot_dir": ")" + kFixtures + R"(",
      "alias_map": ")" + kFixtures + R"(/aliases.txt",
      "cohorts": [{"label": "dead", "kanban_flag": false, "projects": [
        {"name": "alpha", "repo_source": ")" + kFixtures + R"(/alpha.commits.dump",
         "project_end": "1999-01-31T00:00:00Z"}]}]})");
    const RunResult r = run_cli("--config " + (dir / "cohorts.conf").string() + " analyze dead");
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.err.find("dead"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("active"), std::string::npos) << r.err;
    fs::remove_all(dir);
}

TEST(Cli, MissingConfigIsAnIoErrorExit2) {
    const RunResult r = run_cli("--config /nonexistent/cohorts.conf compare");
    EXPECT_EQ(r.exit_code, 2);
}

TEST(Cli, MissingSnapshotIsAnIoErrorExit2) {
    const fs::path dir = fs::temp_directory_path() / "cohort-miner-nosnap";
    fs::create_directories(dir);
    spit(dir / "cohorts.conf", R"({
      "cohorts": [{"label": "c", "projects": [
        {"name": "nosuchproject", "repo_source": ")" + kFixtures + R"(/alpha.commits.dump",
         "project_end": "2024-01-31T00:00:00Z"}]}]})");
    const RunResult r = run_cli("--config " + (dir / "cohorts.conf").string() + " compare");
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("nosuchproject"), std::string::npos) << r.err;
    fs::remove_all(dir);
}

TEST(Cli, OutFlagWritesFile) {
    const fs::path out = fs::temp_directory_path() / "cohort-miner-out.csv";
    const RunResult r = run_cli("--config " + kFixtures + "/cohorts.conf compare --format csv" +
                                " --out " + out.string());
    EXPECT_EQ(r.exit_code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(slurp(out), slurp(kFixtures + "/golden/compare.csv"));
    fs::remove(out);
}

TEST(Cli, SurveyMatchesGolden) {
    const RunResult r = run_cli("survey " + kFixtures + "/survey.csv --format markdown");
    EXPECT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(r.out, slurp(kFixtures + "/golden/survey.markdown"));
}

TEST(Cli, AnalyzeReadsDumpFromStdin) {
    const fs::path dir = fs::temp_directory_path() / "cohort-miner-stdin";
    fs::create_directories(dir);
    spit(dir / "cohorts.conf", R"({
      "snapshot_dir": ")" + kFixtures + R"(",
      "alias_map": ")" + kFixtures + R"(/aliases.txt",
      "cohorts": [{"label": "2023/24", "kanban_flag": false, "projects": [
        {"name": "alpha", "repo_source": "-",
         "project_end": "2024-01-31T00:00:00Z"}]}]})");
    const RunResult r = run_cli("--config " + (dir / "cohorts.conf").string() +
                                " analyze 2023/24 < " + kFixtures + "/alpha.commits.dump");
    EXPECT_EQ(r.exit_code, 0) << r.err;
    EXPECT_NE(r.out.find("2023/24 | 2.5 | 3.5 | 1.0 | 13.2 | 1.5"), std::string::npos) << r.out;
    fs::remove_all(dir);
}

TEST(Cli, DumpCmdPrintsTheLogInvocation) {
    const RunResult r = run_cli("dump-cmd /some/repo");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("git -C '/some/repo' log --numstat"), std::string::npos);
    EXPECT_NE(r.out.find("encode_base64"), std::string::npos);
}

bool have_tool(const char* probe) { return std::system(probe) == 0; }

// End to end against a real repository: the printed pipeline and the internal
// git reader must agree record for record.
TEST(Cli, DumpPipelineAgreesWithInternalReader) {
    if (!have_tool("git --version > /dev/null 2>&1") ||
        !have_tool("perl -MMIME::Base64 -e 1 > /dev/null 2>&1"))
        GTEST_SKIP() << "git or perl unavailable";

    const fs::path repo = fs::temp_directory_path() / "cohort-miner-gitrepo";
    fs::remove_all(repo);
    fs::create_directories(repo);
    const std::string git = "git -C " + repo.string() + " ";
    const auto sh = [](const std::string& command) {
        ASSERT_EQ(std::system(command.c_str()), 0) << command;
    };
    sh(git + "init -q");
    sh(git + "config user.name 'Test Author'");
    sh(git + "config user.email tester@example.org");
    spit(repo / "a.txt", "one\n");
    spit(repo / "img.bin", std::string("\x00\x01\x02", 3));
    sh(git + "add .");
    sh("GIT_AUTHOR_DATE=2024-01-24T10:00:00+0100 GIT_COMMITTER_DATE=2024-01-24T10:00:00+0100 " +
       git + "commit -qm 'initial commit\n\nfixes #12'");
    spit(repo / "a.txt", "one\ntwo\n");
    sh(git + "add .");
    sh("GIT_AUTHOR_DATE=2024-01-25T10:00:00Z GIT_COMMITTER_DATE=2024-01-25T10:00:00Z " + git +
       "commit -qm 'growth #3'");

    // internal reader; %B keeps the trailing newline of the stored message
    const auto internal = read_repository_log(repo.string());
    ASSERT_EQ(internal.size(), 2u);
    EXPECT_EQ(internal[1].message, "initial commit\n\nfixes #12\n");
    EXPECT_EQ(internal[1].author_time, parse_iso8601_utc("2024-01-24T09:00:00Z"));
    EXPECT_FALSE(internal[1].file_deltas.empty());

    // printed pipeline produces a dump that parses to the same records
    const fs::path dump_path = fs::temp_directory_path() / "cohort-miner-pipe.dump";
    const std::string pipeline = dump_command_line(repo.string());
    ASSERT_EQ(std::system((pipeline + " > " + dump_path.string()).c_str()), 0);
    std::ifstream dump_in(dump_path, std::ios::binary);
    const auto piped = parse_commit_log(dump_in);
    EXPECT_EQ(piped, internal);

    fs::remove(dump_path);
    fs::remove_all(repo);
}

}  // namespace
}  // namespace miner
