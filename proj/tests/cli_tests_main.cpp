// End-to-end checks of the command-line surface: subcommand wiring, file
// formats, determinism of result files, and exit codes. Takes the CLI
// binary path as argv[1].

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "glauber/glauber.hpp"

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
    std::cout << (ok ? "ok" : "FAIL") << " - " << what << '\n';
    if (!ok) ++failures;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(const std::string& command) { return std::system(command.c_str()); }

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_tests <path-to-glauber-binary>\n";
        return 2;
    }
    const std::string cli = argv[1];
    const std::string dir = "cli_test_artifacts";
    run("rm -rf " + dir);
    run("mkdir -p " + dir);

    // A two-node model file to drive everything else.
    const std::string model_path = dir + "/pair.model";
    {
        glauber::IsingModel model(glauber::single_edge_graph(2), {{{0, 1}, 0.9}},
                                  {0.9, 0.9, 1});
        glauber::write_model_file(model_path, model);
    }

    // simulate: continuous mode, reproducible output.
    const std::string trace_a = dir + "/a.trace", trace_b = dir + "/b.trace";
    expect(run(cli + " simulate --model " + model_path + " --T 200 --seed 7 --out " + trace_a) == 0,
           "simulate exits 0");
    expect(run(cli + " simulate --model " + model_path + " --T 200 --seed 7 --out " + trace_b) == 0,
           "simulate rerun exits 0");
    expect(!slurp(trace_a).empty(), "trace file written");
    expect(slurp(trace_a) == slurp(trace_b), "same seed gives byte-identical traces");
    {
        const auto trace = glauber::read_trace_file(trace_a);
        expect(trace.node_count() == 2 && trace.horizon() == 200.0, "trace file parses back");
    }

    // simulate: discrete mode.
    const std::string trace_dt = dir + "/dt.trace";
    expect(run(cli + " simulate --model " + model_path + " --mode dt --n 500 --seed 8 --out " +
               trace_dt) == 0,
           "discrete simulate exits 0");
    expect(glauber::read_trace_file(trace_dt).mode() == glauber::TraceMode::discrete,
           "discrete trace mode round-trips");

    // learn: practical mode on the generated trace.
    const std::string edges_path = dir + "/edges.txt";
    expect(run(cli + " learn --trace " + trace_a + " --mode practical --L 1 --tau 0.0005" +
               " --d 1 --alpha 0.9 --beta 0.9 --out " + edges_path) == 0,
           "learn exits 0");
    {
        std::ifstream in(edges_path);
        const auto edges = glauber::read_edge_set(in);
        expect(edges.size() == 1 && edges.contains(0, 1), "strong pair is recovered");
    }

    // learn: theory mode accepts the same trace (threshold comes from the
    // closed forms; the window count is recomputed from the horizon).
    expect(run(cli + " learn --trace " + trace_a + " --mode theory --d 1 --alpha 0.9 --beta 0.9" +
               " --out " + dir + "/edges_theory.txt") == 0,
           "theory-mode learn exits 0");

    // experiment: CSV and manifest, byte-identical across reruns.
    const std::string csv_a = dir + "/res_a.csv", csv_b = dir + "/res_b.csv";
    const std::string manifest = dir + "/run.json";
    const std::string exp_flags =
        " experiment --graph cycle --p 6 --d 2 --coupling constant --theta 0.8"
        " --mode practical --L 1 --tau 0.05 --T 100 --trials 4 --seed 11 --init uniform";
    expect(run(cli + exp_flags + " --out " + csv_a + " --manifest " + manifest) == 0,
           "experiment exits 0");
    expect(run(cli + exp_flags + " --out " + csv_b) == 0, "experiment rerun exits 0");
    expect(slurp(csv_a) == slurp(csv_b), "experiment CSV is deterministic");
    expect(slurp(csv_a).find("# k_max=100") != std::string::npos, "CSV echoes derived k_max");
    expect(slurp(manifest).find("\"success_rate\"") != std::string::npos,
           "manifest records the aggregate");

    // experiment: config file with flag override (seed from file).
    const std::string config_path = dir + "/exp.conf";
    {
        std::ofstream conf(config_path);
        conf << "graph cycle\np 6\nd 2\ntheta 0.8\nL 1\ntau 0.05\nT 100\ntrials 2\nseed 11\n";
    }
    expect(run(cli + " experiment --config " + config_path + " --out " + dir + "/res_c.csv") == 0,
           "experiment from config file exits 0");

    // experiment without a seed anywhere must fail.
    expect(run(cli + " experiment --graph cycle --p 6 --d 2 --theta 0.8 --mode practical"
                     " --L 1 --T 50 --trials 1 --out " + dir + "/nope.csv") != 0,
           "missing seed is an error");

    // verify: filtered battery passes quickly.
    expect(run(cli + " verify --only lemma1 > " + dir + "/verify.log") == 0,
           "verify --only lemma1 exits 0");
    {
        const auto log = slurp(dir + "/verify.log");
        expect(log.find("PASS oracle.lemma1_grid") != std::string::npos,
               "verify prints one line per check");
    }

    // lowerbound: report columns and ensemble size.
    const std::string lb_csv = dir + "/lb.csv";
    expect(run(cli + " lowerbound --p 8 --d 3 --alpha 0.2 --beta 1.0 --n 80 --out " + lb_csv) == 0,
           "lowerbound exits 0");
    {
        const auto text = slurp(lb_csv);
        expect(text.find("variant,C1,Cl,total,bound,margin") != std::string::npos,
               "lowerbound CSV header");
        expect(text.find("# M=4") != std::string::npos, "lowerbound reports M");
    }

    // corrupted model file: nonzero exit.
    const std::string bad_model = dir + "/bad.model";
    {
        std::ofstream out(bad_model);
        out << "2 1 0.1 1.0\n0 1 not-a-number\n";
    }
    expect(run(cli + " simulate --model " + bad_model + " --T 10 --seed 1 --out " + dir +
               "/nope.trace") != 0,
           "corrupted model file is an error");

    std::cout << (failures == 0 ? "ALL OK" : "FAILURES: " + std::to_string(failures)) << '\n';
    return failures == 0 ? 0 : 1;
}
