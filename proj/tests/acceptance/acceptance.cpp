/*
   Copyright 2026 The wohs Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// Acceptance gate: one PASS/FAIL line per criterion, a JSON report with every
// check next to the binary, exit 0 only when all criteria pass.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "wohs/suites.hpp"

#ifndef WOHS_CLI_PATH
#error "WOHS_CLI_PATH must name the wohs executable"
#endif

using namespace wohs;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    int number;
    std::string title;
    bool pass = false;
    double seconds = 0.0;
    nlohmann::json detail;
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Runs the tool with each worker count and compares the output files byte by byte.
nlohmann::json cli_bytes_identical(const std::string& name, const std::string& args, const fs::path& dir, bool& ok)
{
    std::vector<std::string> outputs;
    nlohmann::json j = {{"command", args}};
    for (int w : {1, 4, 16}) {
        const fs::path out = dir / (name + "_w" + std::to_string(w) + ".csv");
        const std::string cmd = std::string("\"") + WOHS_CLI_PATH + "\" " + args + " --workers " + std::to_string(w) +
                                " --out \"" + out.string() + "\"";
        const int rc = std::system(cmd.c_str());
        if (rc != 0) {
            ok = false;
            j["error"] = "exit status " + std::to_string(rc) + " for workers " + std::to_string(w);
            return j;
        }
        outputs.push_back(slurp(out));
    }
    const bool same = !outputs[0].empty() && outputs[0] == outputs[1] && outputs[0] == outputs[2];
    ok &= same;
    j["identical"] = same;
    j["bytes"] = outputs[0].size();
    return j;
}

Criterion from_suite(int number, const std::string& title, Suite s, const SuiteOptions& o)
{
    Criterion c{number, title};
    const auto t0 = std::chrono::steady_clock::now();
    const ValidationReport r = run_suite(s, o);
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.pass = r.pass();
    c.detail = r.to_json();
    for (const Check& ch : r.checks) {
        if (!ch.pass) {
            std::printf("    failed check %s: statistic %.6g, threshold %.6g\n", ch.id.c_str(), ch.statistic,
                        ch.threshold);
        }
    }
    return c;
}

void report(const Criterion& c)
{
    std::printf("criterion %2d %-34s %s  (%.1f s)\n", c.number, c.title.c_str(), c.pass ? "PASS" : "FAIL", c.seconds);
    std::fflush(stdout);
}

} // namespace

int main()
{
    SuiteOptions o;  // seed 20240917, n = 1e5, default grids
    std::vector<Criterion> all;
    auto run = [&](int number, const std::string& title, Suite s) {
        all.push_back(from_suite(number, title, s, o));
        report(all.back());
    };

    run(1, "normalization", Suite::Normalization);
    run(2, "marginalization chain", Suite::Marginalization);
    run(3, "green x jump factorization", Suite::Factorization);
    run(4, "sampler fidelity", Suite::SamplerFit);
    run(5, "collapsed/full-trace equivalence", Suite::ModeEquivalence);
    run(6, "flat-earth convergence", Suite::FlatEarth);
    run(7, "conditioned-measure consistency", Suite::Conditioned);
    run(8, "plain-measure termination", Suite::Termination);

    {
        Criterion c = from_suite(9, "determinism across workers", Suite::Determinism, o);
        const auto t0 = std::chrono::steady_clock::now();
        const fs::path dir = fs::temp_directory_path() / ("wohs_accept_" + std::to_string(::getpid()));
        fs::create_directories(dir);
        bool ok = true;
        nlohmann::json cli = nlohmann::json::array();
        cli.push_back(cli_bytes_identical(
            "walk_full", "walk --alpha 1.3 --dim 3 --start 2.5,0.5,-1 --mode full --n 20000 --seed 4242", dir, ok));
        cli.push_back(cli_bytes_identical(
            "walk_cond", "walk --alpha 0.6 --start -3,1 --measure conditioned --n 5000 --seed 4243", dir, ok));
        cli.push_back(cli_bytes_identical(
            "sample", "sample --alpha 1.5 --start 2,0 --barrier 1 --n 20000 --seed 4244", dir, ok));
        fs::remove_all(dir);
        c.seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!ok) std::printf("    command-line outputs differ across worker counts\n");
        c.pass = c.pass && ok;
        c.detail = {{"suite", c.detail}, {"cli", cli}};
        all.push_back(c);
        report(all.back());
    }

    run(10, "transverse spread ordering", Suite::SpreadTrend);

    bool pass = true;
    nlohmann::json doc = nlohmann::json::array();
    for (const Criterion& c : all) {
        pass &= c.pass;
        doc.push_back({{"criterion", c.number}, {"title", c.title}, {"pass", c.pass}, {"seconds", c.seconds},
                       {"detail", c.detail}});
    }
    std::ofstream("acceptance_report.json") << doc.dump(2) << '\n';
    std::printf("acceptance: %s\n", pass ? "PASS" : "FAIL");
    return pass ? 0 : 1;
}
