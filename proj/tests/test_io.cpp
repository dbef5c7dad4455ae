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

#include <fstream>

#include "fmsounder/emulator.hpp"
#include "fmsounder/errors.hpp"
#include "fmsounder/io.hpp"
#include "fmsounder/waveform.hpp"
#include "test_support.hpp"

using namespace fmsounder;
using test_support::TempDir;
using test_support::slurp;
using test_support::spit;
using test_support::thrown_code;

namespace
{
    IqCapture sample_capture(int reps = 200)
    {
        const auto seq = generate_msequence(10, {10, 3}, 0x3FF, 77);
        IqCapture cap;
        cap.samples = frame_transmit_stream(seq, reps);
        cap.sample_rate_hz = 1.0e6;
        cap.center_freq_hz = 86.0e6;
        cap.capture_id = "test-capture";
        cap.provenance = "emulated";
        cap.extra["frame_len"] = "1100";
        return cap;
    }
} // namespace

TEST_CASE("capture round trip is bit-exact and writers are deterministic")
{
    TempDir dir("io");
    const auto cap = sample_capture();
    REQUIRE(cap.samples.size() == 220000);
    write_capture(cap, dir / "tx.iq");

    const auto back = read_capture(dir / "tx.iq");
    CHECK(back.samples == cap.samples);
    CHECK(back.sample_rate_hz == cap.sample_rate_hz);
    CHECK(back.center_freq_hz == cap.center_freq_hz);
    CHECK(back.capture_id == cap.capture_id);
    CHECK(back.provenance == cap.provenance);
    CHECK(back.extra == cap.extra);

    // byte-identical re-write
    write_capture(cap, dir / "tx2.iq");
    CHECK(slurp(dir / "tx.iq") == slurp(dir / "tx2.iq"));
    CHECK(slurp(capture_sidecar_path(dir / "tx.iq")) == slurp(capture_sidecar_path(dir / "tx2.iq")));

    // payload size check: 8 bytes per complex sample
    CHECK(std::filesystem::file_size(dir / "tx.iq") == cap.samples.size() * 8);
}

TEST_CASE("capture reader rejects truncation, mismatch and bad magic")
{
    TempDir dir("io");
    const auto cap = sample_capture(10);
    write_capture(cap, dir / "c.iq");

    SUBCASE("truncated payload")
    {
        std::filesystem::resize_file(dir / "c.iq", std::filesystem::file_size(dir / "c.iq") - 4);
        CHECK(thrown_code([&] { read_capture(dir / "c.iq"); }) == "FormatError");
    }
    SUBCASE("sidecar sample-count mismatch")
    {
        auto meta = slurp(capture_sidecar_path(dir / "c.iq"));
        const auto pos = meta.find("\"n_samples\": 11000");
        REQUIRE(pos != std::string::npos);
        meta.replace(pos, 18, "\"n_samples\": 10999");
        spit(capture_sidecar_path(dir / "c.iq"), meta);
        CHECK(thrown_code([&] { read_capture(dir / "c.iq"); }) == "FormatError");
    }
    SUBCASE("bad magic")
    {
        auto meta = slurp(capture_sidecar_path(dir / "c.iq"));
        const auto pos = meta.find("fmsounder.iq.v1");
        REQUIRE(pos != std::string::npos);
        meta.replace(pos, 15, "not.a.capture.x");
        spit(capture_sidecar_path(dir / "c.iq"), meta);
        CHECK(thrown_code([&] { read_capture(dir / "c.iq"); }) == "FormatError");
    }
    SUBCASE("missing sidecar")
    {
        std::filesystem::remove(capture_sidecar_path(dir / "c.iq"));
        CHECK(thrown_code([&] { read_capture(dir / "c.iq"); }) == "FormatError");
    }
}

TEST_CASE("CSV import: rows, parse errors and non-finite samples")
{
    TempDir dir("csv");

    spit(dir / "ok.csv", "i,q\n1.0,-0.5\n0.25,0.75\n-1,2\n");
    const auto cap = import_csv_iq(dir / "ok.csv", 1.0e6);
    REQUIRE(cap.samples.size() == 3);
    CHECK(cap.samples[0] == std::complex<float>{1.0f, -0.5f});
    CHECK(cap.samples[2] == std::complex<float>{-1.0f, 2.0f});
    CHECK(cap.provenance == "imported");

    spit(dir / "bad.csv", "i,q\n1.0,abc\n");
    CHECK(thrown_code([&] { import_csv_iq(dir / "bad.csv", 1.0e6); }) == "ParseError");

    spit(dir / "nan.csv", "i,q\n1.0,nan\n");
    CHECK(thrown_code([&] { import_csv_iq(dir / "nan.csv", 1.0e6); }) == "NonFiniteSample");

    spit(dir / "nohdr.csv", "1.0,2.0\n");
    CHECK(thrown_code([&] { import_csv_iq(dir / "nohdr.csv", 1.0e6); }) == "ParseError");
}

TEST_CASE("PDP CSV round trip with sidecar metadata")
{
    TempDir dir("pdp");
    Pdp pdp;
    pdp.delays_us = {0.0, 1.0, 2.0};
    pdp.power_db = {0.0, -12.25, -40.5};
    pdp.power_linear = {1.0, 0.0595662, 0.0000891251};
    pdp.n_averaged = 200;
    pdp.peak_linear_raw = 0.98;
    pdp.noise_floor_db = -41.0;

    std::map<std::string, std::string> extra{{"offset", "17"}};
    write_pdp_csv(pdp, dir / "p.csv", extra);

    const auto text = slurp(dir / "p.csv");
    CHECK(text.find("delay_us,power_db,power_linear\n") == 0);
    CHECK(text.find("1.000000,-12.250000,0.059566") != std::string::npos); // fixed %.6f

    std::map<std::string, std::string> extra_back;
    const auto back = read_pdp_csv(dir / "p.csv", &extra_back);
    REQUIRE(back.size() == 3);
    CHECK(back.n_averaged == 200);
    CHECK(back.noise_floor_db.has_value());
    CHECK(*back.noise_floor_db == doctest::Approx(-41.0));
    CHECK(extra_back == extra);
    for (std::size_t k = 0; k < 3; ++k)
    {
        CHECK(back.delays_us[k] == doctest::Approx(pdp.delays_us[k]).epsilon(1e-6));
        CHECK(back.power_db[k] == doctest::Approx(pdp.power_db[k]).epsilon(1e-6));
    }

    // sidecar bin-count mismatch
    auto meta = slurp(pdp_sidecar_path(dir / "p.csv"));
    const auto pos = meta.find("\"n_bins\": 3");
    REQUIRE(pos != std::string::npos);
    meta.replace(pos, 11, "\"n_bins\": 4");
    spit(pdp_sidecar_path(dir / "p.csv"), meta);
    CHECK(thrown_code([&] { read_pdp_csv(dir / "p.csv"); }) == "FormatError");

    CHECK(thrown_code([&] { read_pdp_csv(dir / "missing.csv"); }) == "FormatError");
}

TEST_CASE("model CSV export")
{
    TempDir dir("model");
    write_model_csv(builtin_hilly(), 0.5, dir / "h.csv");
    const auto text = slurp(dir / "h.csv");
    CHECK(text.find("delay_us,power_db\n") == 0);
    // 0..20 us at 0.5 us spacing = 41 rows + header
    int lines = 0;
    for (char c : text)
        if (c == '\n')
            ++lines;
    CHECK(lines == 42);
    CHECK(text.find("8.000000,-30.500000") != std::string::npos);
}
