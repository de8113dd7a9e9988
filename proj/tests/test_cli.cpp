#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef BUGNET_BIN
#error "BUGNET_BIN must point at the CLI executable"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout only
};

RunResult run(const std::string& args) {
    const std::string out_file = "cli_stdout.tmp";
    const std::string cmd =
        std::string(BUGNET_BIN) + " " + args + " > " + out_file + " 2> cli_stderr.tmp";
    const int status = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_file, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    result.output = buffer.str();
    return result;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_three_bug_stream(const std::string& path) {
    std::ofstream out(path);
    out << R"({"bug":"a","ts":"2003-01-01T00:00:00Z","actor":"u1","type":"CREATE","value":""})" "\n";
    out << R"({"bug":"b","ts":"2003-01-01T01:00:00Z","actor":"u2","type":"CREATE","value":""})" "\n";
    out << R"({"bug":"c","ts":"2003-01-01T02:00:00Z","actor":"u3","type":"CREATE","value":""})" "\n";
    out << R"({"bug":"a","ts":"2003-01-02T00:00:00Z","actor":"u2","type":"CC_ADD","value":"u1"})" "\n";
    out << R"({"bug":"a","ts":"2003-01-03T00:00:00Z","actor":"u2","type":"RESOLUTION","value":"FIXED"})" "\n";
    out << R"({"bug":"a","ts":"2003-01-03T00:00:01Z","actor":"u2","type":"STATUS","value":"RESOLVED"})" "\n";
}

}  // namespace

TEST_CASE("stats renders a table for a small stream") {
    write_three_bug_stream("cli_events.jsonl");
    const RunResult r = run("stats --events cli_events.jsonl");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("Total bug reports    3") != std::string::npos);
    CHECK(r.output.find("Change events        6") != std::string::npos);
    CHECK(r.output.find("Changes / report     2.00") != std::string::npos);
}

TEST_CASE("stats --json matches the text numbers") {
    const RunResult r = run("stats --events cli_events.jsonl --json");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"total_bugs\": 3") != std::string::npos);
    CHECK(r.output.find("\"total_events\": 6") != std::string::npos);
    CHECK(r.output.find("\"changes_per_report\": 2.0") != std::string::npos);
}

TEST_CASE("missing events file exits 2") {
    const RunResult r = run("stats --events no_such_file.jsonl");
    CHECK(r.exit_code == 2);
}

TEST_CASE("malformed line exits 2 in strict mode, 0 with --lenient") {
    {
        std::ofstream out("cli_bad.jsonl");
        out << "garbage\n";
        out << R"({"bug":"a","ts":"2003-01-01T00:00:00Z","actor":"u1","type":"CREATE","value":""})" "\n";
    }
    CHECK(run("stats --events cli_bad.jsonl").exit_code == 2);
    CHECK(run("stats --events cli_bad.jsonl --lenient").exit_code == 0);
}

TEST_CASE("usage errors exit 2, help exits 0") {
    CHECK(run("stats").exit_code == 2);              // missing --events
    CHECK(run("no-such-command").exit_code == 2);
    CHECK(run("--help").exit_code == 0);
}

TEST_CASE("synth then full pipeline through the binary") {
    const std::string synth_args =
        "synth --users 120 --bugs 200 --months 5 --seed 9 --out cli_synth.jsonl";
    CHECK(run(synth_args).exit_code == 0);

    // identical invocation is byte-identical
    CHECK(run("synth --users 120 --bugs 200 --months 5 --seed 9 --out cli_synth2.jsonl")
              .exit_code == 0);
    CHECK(slurp("cli_synth.jsonl") == slurp("cli_synth2.jsonl"));

    const RunResult hyp = run("hypotheses --events cli_synth.jsonl --threads 2 --csv");
    CHECK(hyp.exit_code == 0);
    CHECK(hyp.output.find("hypothesis,comparison,alternative") != std::string::npos);
    CHECK(hyp.output.find("FIX1~DUP1") != std::string::npos);

    CHECK(run("train --events cli_synth.jsonl --model cli_model.json --seed 5 --threads 2")
              .exit_code == 0);
    const RunResult eval1 = run(
        "evaluate --events cli_synth.jsonl --model cli_model.json --seed 5 --threads 2 --json "
        "--out cli_report.json");
    CHECK(eval1.exit_code == 0);
    CHECK(slurp("cli_report.json").find("\"classifiers\"") != std::string::npos);

    // determinism: retrain + re-evaluate reproduces both artifacts exactly
    CHECK(run("train --events cli_synth.jsonl --model cli_model2.json --seed 5 --threads 2")
              .exit_code == 0);
    CHECK(slurp("cli_model.json") == slurp("cli_model2.json"));
    CHECK(run("evaluate --events cli_synth.jsonl --model cli_model2.json --seed 5 --threads 2 "
              "--json --out cli_report2.json")
              .exit_code == 0);
    CHECK(slurp("cli_report.json") == slurp("cli_report2.json"));

    CHECK(run("evaluate --events cli_synth.jsonl --model missing_model.json").exit_code == 2);
}

TEST_CASE("dump-network emits the documented edge-list format") {
    {
        std::ofstream out("cli_net.jsonl");
        out << R"({"bug":"a","ts":"2003-01-01T00:00:00Z","actor":"u1","type":"CREATE","value":""})" "\n";
        out << R"({"bug":"a","ts":"2003-01-02T00:00:00Z","actor":"u1","type":"CC_ADD","value":"u2"})" "\n";
        out << R"({"bug":"a","ts":"2003-01-02T01:00:00Z","actor":"u1","type":"CC_ADD","value":"u2"})" "\n";
        out << R"({"bug":"a","ts":"2003-01-02T02:00:00Z","actor":"u3","type":"ASSIGN","value":"u1"})" "\n";
    }
    const RunResult r = run(
        "dump-network --events cli_net.jsonl --start 2003-01-01T00:00:00Z "
        "--end 2003-01-31T00:00:00Z");
    CHECK(r.exit_code == 0);
    CHECK(r.output ==
          "# window 2003-01-01T00:00:00Z 2003-01-31T00:00:00Z\n"
          "u1\tu2\t2\t0\n"
          "u3\tu1\t0\t1\n");
}

TEST_CASE("dump-features emits the CSV header") {
    const RunResult r = run("dump-features --events cli_events.jsonl");
    CHECK(r.exit_code == 0);
    CHECK(r.output.rfind("bug_id,reporter_id,in_lcc,evcent", 0) == 0);
}
