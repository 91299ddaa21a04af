#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

std::string elbmatch_bin;
fs::path work_dir;

int run(const std::string& args, const std::string& stdout_to = "/dev/null",
        const std::string& stderr_to = "/dev/null") {
    const std::string cmd =
        "\"" + elbmatch_bin + "\" " + args + " > " + stdout_to + " 2> " + stderr_to;
    const int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

fs::path make_pattern_file(const std::string& name) {
    // 12 values, 2 subpatterns, placeholder thresholds
    const fs::path path = work_dir / name;
    std::ostringstream os;
    os << "12 2\n6 6\n0.5 0.5\n";
    for (int i = 0; i < 12; ++i) os << (i % 4) * 0.75 << "\n";
    write_file(path, os.str());
    return path;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

} // namespace

TEST_CASE("gen output is byte-identical across process invocations") {
    const auto pat = make_pattern_file("pat.txt");
    const std::string flags = " gen --pattern-file " + q(pat) +
                              " --length 5000 --seed 9 --probability 1e-3"
                              " --threshold-ratio 20 --out ";
    CHECK(run(flags + q(work_dir / "a")) == 0);
    CHECK(run(flags + q(work_dir / "b")) == 0);
    const auto a = slurp(work_dir / "a.stream");
    CHECK(!a.empty());
    CHECK(a == slurp(work_dir / "b.stream"));
    CHECK(slurp(work_dir / "a.embed.csv") == slurp(work_dir / "b.embed.csv"));
    CHECK(slurp(work_dir / "a.json") == slurp(work_dir / "b.json"));
    CHECK(slurp(work_dir / "a.embed.csv").substr(0, 11) == "embed_start");
}

TEST_CASE("all three algorithms emit byte-identical match CSVs") {
    const auto pat = make_pattern_file("pat.txt");
    REQUIRE(run(" gen --pattern-file " + q(pat) +
                " --length 8000 --seed 3 --probability 1e-3 --out " +
                q(work_dir / "s")) == 0);
    for (const char* algo : {"ss", "elb-ele", "elb-seq"}) {
        CHECK(run(" match --pattern-file " + q(pat) + " --stream-file " +
                  q(work_dir / "s.stream") + " --algo " + algo +
                  " --p 2 --threshold-ratio 15 --block-ratio 25 --out " +
                  q(work_dir / algo)) == 0);
    }
    const auto ss = slurp(work_dir / "ss.matches.csv");
    CHECK(ss.substr(0, 11) == "match_start");
    CHECK(ss.size() > 12); // at least one match: embedded copies exist
    CHECK(ss == slurp(work_dir / "elb-ele.matches.csv"));
    CHECK(ss == slurp(work_dir / "elb-seq.matches.csv"));

    const auto stats = slurp(work_dir / "elb-seq.stats.csv");
    CHECK(stats.find("windows_total,windows_pruned,candidates_verified,block_checks,"
                     "element_touches_pruning,element_touches_verify,pruning_power") == 0);
}

TEST_CASE("usage errors exit with code 2") {
    const auto pat = make_pattern_file("pat.txt");
    write_file(work_dir / "empty.stream", "");
    CHECK(run(" match --pattern-file " + q(pat) + " --stream-file " +
              q(work_dir / "empty.stream") + " --algo elb-seq --block-ratio 60 --out " +
              q(work_dir / "x")) == 2);
    CHECK(run(" match --stream-file " + q(work_dir / "empty.stream") + " --out " +
              q(work_dir / "x")) == 2); // missing --pattern-file
    CHECK(run(" match --pattern-file " + q(pat) + " --stream-file " +
              q(work_dir / "empty.stream") + " --algo bogus --out " +
              q(work_dir / "x")) == 2);
    CHECK(run(" gen --pattern-file " + q(pat) + " --length 5000 --p 0 --out " +
              q(work_dir / "x")) == 2);
}

TEST_CASE("data errors exit with code 1") {
    const auto pat = make_pattern_file("pat.txt");
    // saturating embedding probability
    CHECK(run(" gen --pattern-file " + q(pat) +
              " --length 5000 --seed 1 --probability 0.9 --out " + q(work_dir / "x")) == 1);
    // malformed pattern file, error names the line
    write_file(work_dir / "bad.txt", "3 1\n3\n0.5\n1\nnope\n3\n");
    const auto err_file = work_dir / "err.txt";
    CHECK(run(" envelope --pattern-file " + q(work_dir / "bad.txt") + " --out " +
              q(work_dir / "x.csv"),
              "/dev/null", err_file.string()) == 1);
    CHECK(slurp(err_file).find(":5") != std::string::npos);
    // missing stream file
    CHECK(run(" match --pattern-file " + q(pat) +
              " --stream-file /nonexistent.stream --algo ss --out " +
              q(work_dir / "x")) == 1);
}

TEST_CASE("empty stream file produces an empty match set") {
    const auto pat = make_pattern_file("pat.txt");
    write_file(work_dir / "empty.stream", "");
    CHECK(run(" match --pattern-file " + q(pat) + " --stream-file " +
              q(work_dir / "empty.stream") + " --algo elb-seq --out " +
              q(work_dir / "e")) == 0);
    CHECK(slurp(work_dir / "e.matches.csv") == "match_start\n");
    const auto stats = slurp(work_dir / "e.stats.csv");
    CHECK(stats.find("\n0,0,0,0,0,0,na") != std::string::npos);
}

TEST_CASE("envelope dump starts at the block width for seq") {
    const auto pat = make_pattern_file("pat.txt");
    CHECK(run(" envelope --pattern-file " + q(pat) +
              " --variant seq --block-ratio 25 --out " + q(work_dir / "seq.csv")) == 0);
    const auto seq = slurp(work_dir / "seq.csv");
    CHECK(seq.find("index,upper,lower\n3,") == 0); // w = 25% of 12 = 3

    CHECK(run(" envelope --pattern-file " + q(pat) + " --variant ele --out " +
              q(work_dir / "ele.csv")) == 0);
    const auto ele = slurp(work_dir / "ele.csv");
    CHECK(ele.find("index,upper,lower\n1,") == 0);
    // 12 data rows plus header
    CHECK(std::count(ele.begin(), ele.end(), '\n') == 13);
}

TEST_CASE("bench sweeps an axis and reports SS speedup of 1") {
    const auto pat = make_pattern_file("pat.txt");
    CHECK(run(" bench --pattern-file " + q(pat) +
              " --axis p --length 4000 --reps 1 --seed 2 --block-ratio 25 --out " +
              q(work_dir / "bench.csv"),
              (work_dir / "bench.out").string()) == 0);
    const auto csv = slurp(work_dir / "bench.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 13); // header + 4 p-values x 3 algos
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line.find("axis,axis_value,algo,") == 0);
    int ss_rows = 0;
    while (std::getline(lines, line)) {
        if (line.find(",SS,") == std::string::npos) continue;
        ++ss_rows;
        CHECK(line.substr(line.rfind(',') + 1) == "1"); // speedup_vs_ss
    }
    CHECK(ss_rows == 4);
}

TEST_CASE("ELB_THREADS changes scheduling but not results") {
    const auto pat = make_pattern_file("pat.txt");
    const std::string flags = " bench --pattern-file " + q(pat) +
                              " --axis threshold --length 3000 --reps 1 --seed 6"
                              " --block-ratio 25 --out ";
    const std::string cmd1 = "ELB_THREADS=1 \"" + elbmatch_bin + "\"" + flags +
                             q(work_dir / "t1.csv") + " > /dev/null 2>&1";
    const std::string cmd2 = "ELB_THREADS=4 \"" + elbmatch_bin + "\"" + flags +
                             q(work_dir / "t2.csv") + " > /dev/null 2>&1";
    REQUIRE(WEXITSTATUS(std::system(cmd1.c_str())) == 0);
    REQUIRE(WEXITSTATUS(std::system(cmd2.c_str())) == 0);

    // counters and match counts agree; timings may differ
    auto strip_timing = [](const std::string& csv) {
        std::istringstream lines(csv);
        std::string line, out;
        while (std::getline(lines, line)) {
            std::vector<std::string> cols;
            std::istringstream fields(line);
            std::string field;
            while (std::getline(fields, field, ',')) cols.push_back(field);
            for (std::size_t i = 0; i + 3 < cols.size(); ++i) out += cols[i] + ",";
            out += "\n";
        }
        return out;
    };
    CHECK(strip_timing(slurp(work_dir / "t1.csv")) ==
          strip_timing(slurp(work_dir / "t2.csv")));
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <path-to-elbmatch> [doctest args]\n");
        return 1;
    }
    elbmatch_bin = argv[1];
    work_dir = fs::temp_directory_path() / "elb_cli_tests";
    fs::remove_all(work_dir);
    fs::create_directories(work_dir);

    doctest::Context context;
    context.applyCommandLine(argc - 1, argv + 1);
    const int rc = context.run();
    fs::remove_all(work_dir);
    return rc;
}
