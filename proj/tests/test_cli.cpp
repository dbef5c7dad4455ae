// SPDX-License-Identifier: Apache-2.0
//
// fmsounder  FM-band channel sounding simulation and PDP modeling toolkit
// Copyright (C) 2026 The fmsounder authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "doctest.h"

#include <nlohmann/json.hpp>

#include "fmsounder/io.hpp"
#include "test_support.hpp"

using test_support::TempDir;
using test_support::run_cli;
using test_support::slurp;

TEST_CASE("cli: model eval prints the curve value")
{
    auto res = run_cli("model eval --model hilly --tau 8");
    CHECK(res.exit_code == 0);
    CHECK(res.output == "-30.5\n");

    res = run_cli("model eval --model bad-urban --tau 12.5");
    CHECK(res.exit_code == 0);
    CHECK(res.output == "-10.4\n");

    res = run_cli("model eval --model bad-urban --tau 5");
    CHECK(res.output == "-8.5\n");
}

TEST_CASE("cli: usage errors exit with 2")
{
    CHECK(run_cli("").exit_code == 2);                       // missing subcommand
    CHECK(run_cli("frobnicate").exit_code == 2);             // unknown subcommand
    CHECK(run_cli("model eval --model hilly").exit_code == 2); // missing --tau
    CHECK(run_cli("estimate --bogus-flag 1").exit_code == 2);
}

TEST_CASE("cli: domain errors exit with 4 and a machine-readable code")
{
    TempDir dir("cli");
    const auto res = run_cli("generate --m 10 --taps 10,4 -o " + (dir / "tx.iq").string());
    CHECK(res.exit_code == 4);
    const auto err = nlohmann::json::parse(res.error);
    CHECK(err.at("error") == "NonPrimitivePolynomial");
}

TEST_CASE("cli: data errors exit with 3")
{
    const auto res = run_cli("estimate -i /nonexistent/rx.iq --seq /nonexistent/seq.json -o /tmp/x.csv");
    CHECK(res.exit_code == 3);
    const auto err = nlohmann::json::parse(res.error);
    CHECK(err.at("error") == "FormatError");

    CHECK(run_cli("model eval --model no-such-model --tau 1").exit_code == 3);
}

TEST_CASE("cli: generate -> emulate -> estimate -> metrics -> compare chain")
{
    TempDir dir("chain");
    const auto tx = (dir / "tx.iq").string();
    const auto rx = (dir / "rx.iq").string();
    const auto pdp = (dir / "pdp.csv").string();

    auto res = run_cli("generate --m 10 --taps 10,3 --pad 77 --reps 40 -o " + tx);
    REQUIRE(res.exit_code == 0);
    CHECK(std::filesystem::exists(dir / "tx.iq"));
    CHECK(std::filesystem::exists(dir / "tx.iqmeta.json"));
    CHECK(std::filesystem::exists(dir / "tx.seq.json"));
    CHECK(std::filesystem::file_size(dir / "tx.iq") == 40 * 1100 * 8);

    res = run_cli("emulate --model hilly --spacing-us 1 --min-db -40 --snr-db 35 --fading static --seed 42 -i " +
                  tx + " -o " + rx);
    REQUIRE(res.exit_code == 0);
    const auto cap = fmsounder::read_capture(rx);
    CHECK(cap.extra.at("model") == "hilly");
    CHECK(cap.extra.at("seed") == "42");
    CHECK(cap.extra.at("snr_db") == "35");
    CHECK(cap.extra.at("fading") == "static");
    CHECK(cap.samples.size() == 40 * 1100 + 14); // max hilly delay at -40 dB

    res = run_cli("estimate -i " + rx + " --seq " + (dir / "tx.seq.json").string() + " --window-us 100 -o " + pdp);
    REQUIRE(res.exit_code == 0);
    CHECK(std::filesystem::exists(dir / "pdp.csv"));
    CHECK(std::filesystem::exists(dir / "pdp.meta.json"));

    res = run_cli("metrics -i " + pdp + " --threshold-db 6 --x-db 25 --json");
    REQUIRE(res.exit_code == 0);
    const auto report = nlohmann::json::parse(res.output);
    CHECK(report.at("n_taps").get<int>() >= 9);
    CHECK(report.at("cluster_count").get<int>() >= 2);

    res = run_cli("compare --pdp " + pdp + " --model hilly --json -o " + (dir / "resid.csv").string());
    REQUIRE(res.exit_code == 0);
    const auto cmp = nlohmann::json::parse(res.output);
    CHECK(cmp.at("rmse_db").get<double>() < 3.0);
    CHECK(std::filesystem::exists(dir / "resid.csv"));
    CHECK(slurp(dir / "resid.csv").find("delay_us,pdp_db,model_db,residual_db\n") == 0);
}

TEST_CASE("cli: pipeline writes the full artifact set")
{
    TempDir dir("pipe");
    const auto res =
        run_cli("pipeline --model hilly --snr-db 40 --seed 3 --reps 40 -o " + dir.path().string());
    REQUIRE(res.exit_code == 0);
    for (const char *name : {"seq.json", "tx.iq", "tx.iqmeta.json", "rx.iq", "rx.iqmeta.json", "pdp.csv",
                             "pdp.meta.json", "compare.csv", "report.json"})
        CHECK(std::filesystem::exists(dir / name));

    const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
    CHECK(report.at("model") == "hilly");
    CHECK(report.at("estimate").at("n_averaged").get<int>() == 39); // tail window clipped
    CHECK(report.at("compare").at("rmse_db").get<double>() < 2.0);
}

TEST_CASE("cli: pipeline honors FMSOUNDER_OUT_DIR")
{
    TempDir dir("envdir");
    const std::string cmd = "FMSOUNDER_OUT_DIR=" + dir.path().string() + " " + FMSOUNDER_CLI_PATH +
                            " pipeline --model hilly --snr-db 40 --seed 3 --reps 20 > /dev/null 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(std::filesystem::exists(dir / "report.json"));
}

TEST_CASE("cli: noiseless-ish pipeline self-consistency")
{
    TempDir dir("selfcheck");
    const auto res =
        run_cli("pipeline --model hilly --snr-db 99 --seed 1 -o " + dir.path().string());
    REQUIRE(res.exit_code == 0);
    const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
    CHECK(report.at("compare").at("rmse_db").get<double>() <= 0.5);
}

TEST_CASE("cli: model export writes the grid CSV")
{
    TempDir dir("export");
    const auto out = (dir / "hilly.csv").string();
    const auto res = run_cli("model export --model hilly --spacing 0.1 -o " + out);
    REQUIRE(res.exit_code == 0);
    const auto text = slurp(out);
    CHECK(text.find("delay_us,power_db\n") == 0);
    CHECK(text.find("12.000000,-19.785500") != std::string::npos);
}
