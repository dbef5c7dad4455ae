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

#ifndef fmsounder_io_H
#define fmsounder_io_H

#include <complex>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "fmsounder/estimator.hpp"
#include "fmsounder/models.hpp"

namespace fmsounder
{

    // Complex baseband capture. On disk: raw little-endian binary32,
    // interleaved I then Q per sample, plus a JSON sidecar
    // (<stem>.iqmeta.json) carrying the metadata below.
    struct IqCapture
    {
        std::vector<std::complex<float>> samples;
        double sample_rate_hz = 1.0e6;
        double center_freq_hz = 86.0e6; // metadata only
        std::string capture_id;
        std::string provenance = "emulated"; // emulated | imported
        std::map<std::string, std::string> extra;
    };

    // Sidecar path for a capture payload: extension replaced by
    // ".iqmeta.json" (tx.iq -> tx.iqmeta.json).
    std::filesystem::path capture_sidecar_path(const std::filesystem::path &payload_path);

    // Lossless round-trip; writers are deterministic (same capture ->
    // byte-identical files). Throws FormatError on bad magic, truncated
    // payload or sidecar mismatch.
    void write_capture(const IqCapture &capture, const std::filesystem::path &path);
    IqCapture read_capture(const std::filesystem::path &path);

    // CSV with header "i,q", finite reals. Throws ParseError /
    // NonFiniteSample.
    IqCapture import_csv_iq(const std::filesystem::path &path, double sample_rate_hz);

    // PDP CSV: header "delay_us,power_db,power_linear", fixed %.6f. The
    // sidecar (<stem>.meta.json) carries n_averaged, noise_floor_db and any
    // extra entries (alignment offset, source model, ...).
    std::filesystem::path pdp_sidecar_path(const std::filesystem::path &csv_path);
    void write_pdp_csv(const Pdp &pdp, const std::filesystem::path &path,
                       const std::map<std::string, std::string> &extra_meta = {});
    Pdp read_pdp_csv(const std::filesystem::path &path, std::map<std::string, std::string> *extra_meta = nullptr);

    // Model evaluated on a uniform grid: header "delay_us,power_db", %.6f.
    void write_model_csv(const PdpModel &model, double spacing_us, const std::filesystem::path &path);

} // namespace fmsounder

#endif
