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

#include "fmsounder/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fmsounder/errors.hpp"

namespace fmsounder
{

    namespace
    {
        constexpr const char *iq_magic = "fmsounder.iq.v1";
        constexpr const char *pdp_magic = "fmsounder.pdp.v1";

        static_assert(std::endian::native == std::endian::little,
                      "capture payload writer assumes a little-endian host");

        std::string read_text_file(const std::filesystem::path &path, const char *what)
        {
            std::ifstream in(path, std::ios::binary);
            if (!in)
                throw data_error("FormatError", std::string(what) + " not readable: " + path.string());
            std::ostringstream ss;
            ss << in.rdbuf();
            return ss.str();
        }

        void write_text_file(const std::filesystem::path &path, const std::string &text)
        {
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out)
                throw data_error("FormatError", "cannot open for writing: " + path.string());
            out << text;
        }

        nlohmann::json parse_json_file(const std::filesystem::path &path, const char *what)
        {
            try
            {
                return nlohmann::json::parse(read_text_file(path, what));
            }
            catch (const nlohmann::json::exception &e)
            {
                throw data_error("FormatError", std::string(what) + " is not valid JSON: " + e.what());
            }
        }

        std::string format_fixed6(double v)
        {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.6f", v);
            return buf;
        }
    } // namespace

    std::filesystem::path capture_sidecar_path(const std::filesystem::path &payload_path)
    {
        std::filesystem::path p = payload_path;
        p.replace_extension(".iqmeta.json");
        return p;
    }

    void write_capture(const IqCapture &capture, const std::filesystem::path &path)
    {
        if (capture.sample_rate_hz <= 0.0)
            throw domain_error("InvalidArgument", "capture sample rate must be positive");

        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw data_error("FormatError", "cannot open for writing: " + path.string());
        if (!capture.samples.empty())
            out.write(reinterpret_cast<const char *>(capture.samples.data()),
                      static_cast<std::streamsize>(capture.samples.size() * sizeof(std::complex<float>)));
        out.close();
        if (!out)
            throw data_error("FormatError", "short write: " + path.string());

        nlohmann::ordered_json j;
        j["format"] = iq_magic;
        j["n_samples"] = capture.samples.size();
        j["sample_rate_hz"] = capture.sample_rate_hz;
        j["center_freq_hz"] = capture.center_freq_hz;
        j["capture_id"] = capture.capture_id;
        j["provenance"] = capture.provenance;
        j["extra"] = capture.extra;
        write_text_file(capture_sidecar_path(path), j.dump(2) + "\n");
    }

    IqCapture read_capture(const std::filesystem::path &path)
    {
        const auto sidecar = capture_sidecar_path(path);
        const nlohmann::json j = parse_json_file(sidecar, "capture sidecar");

        IqCapture cap;
        std::size_t n_samples = 0;
        try
        {
            if (j.at("format").get<std::string>() != iq_magic)
                throw data_error("FormatError", "bad magic in " + sidecar.string());
            n_samples = j.at("n_samples").get<std::size_t>();
            cap.sample_rate_hz = j.at("sample_rate_hz").get<double>();
            cap.center_freq_hz = j.value("center_freq_hz", 0.0);
            cap.capture_id = j.value("capture_id", std::string{});
            cap.provenance = j.value("provenance", std::string{"imported"});
            if (j.contains("extra"))
                cap.extra = j.at("extra").get<std::map<std::string, std::string>>();
        }
        catch (const nlohmann::json::exception &e)
        {
            throw data_error("FormatError", "capture sidecar is missing fields: " + std::string(e.what()));
        }
        if (cap.sample_rate_hz <= 0.0)
            throw data_error("FormatError", "capture sidecar declares a non-positive sample rate");

        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw data_error("FormatError", "capture payload not readable: " + path.string());
        in.seekg(0, std::ios::end);
        const auto bytes = static_cast<std::size_t>(in.tellg());
        in.seekg(0, std::ios::beg);
        if (bytes != n_samples * sizeof(std::complex<float>))
            throw data_error("FormatError", "payload size " + std::to_string(bytes) + " does not match sidecar (" +
                                                std::to_string(n_samples) + " samples x 8 bytes)");
        cap.samples.resize(n_samples);
        if (n_samples > 0)
        {
            in.read(reinterpret_cast<char *>(cap.samples.data()), static_cast<std::streamsize>(bytes));
            if (!in)
                throw data_error("FormatError", "truncated payload: " + path.string());
        }
        return cap;
    }

    IqCapture import_csv_iq(const std::filesystem::path &path, double sample_rate_hz)
    {
        if (sample_rate_hz <= 0.0)
            throw domain_error("InvalidArgument", "sample rate must be positive");
        std::ifstream in(path);
        if (!in)
            throw data_error("ParseError", "cannot read " + path.string());

        auto trim = [](std::string s) {
            while (!s.empty() && (s.back() == '\r' || s.back() == '\n' || s.back() == ' '))
                s.pop_back();
            std::size_t b = 0;
            while (b < s.size() && s[b] == ' ')
                ++b;
            return s.substr(b);
        };

        std::string line;
        if (!std::getline(in, line) || trim(line) != "i,q")
            throw data_error("ParseError", "expected CSV header 'i,q' in " + path.string());

        auto parse_field = [&](const std::string &field, std::size_t line_no) {
            const std::string t = trim(field);
            if (t.empty())
                throw data_error("ParseError", "empty field at line " + std::to_string(line_no));
            char *end = nullptr;
            const double v = std::strtod(t.c_str(), &end);
            if (end != t.c_str() + t.size())
                throw data_error("ParseError", "not a number at line " + std::to_string(line_no) + ": '" + t + "'");
            if (!std::isfinite(v))
                throw data_error("NonFiniteSample", "non-finite sample at line " + std::to_string(line_no));
            return v;
        };

        IqCapture cap;
        cap.sample_rate_hz = sample_rate_hz;
        cap.provenance = "imported";
        cap.capture_id = path.stem().string();
        std::size_t line_no = 1;
        while (std::getline(in, line))
        {
            ++line_no;
            const std::string t = trim(line);
            if (t.empty())
                continue;
            const auto comma = t.find(',');
            if (comma == std::string::npos)
                throw data_error("ParseError", "expected 'i,q' at line " + std::to_string(line_no));
            const double i_val = parse_field(t.substr(0, comma), line_no);
            const double q_val = parse_field(t.substr(comma + 1), line_no);
            cap.samples.emplace_back(static_cast<float>(i_val), static_cast<float>(q_val));
        }
        return cap;
    }

    std::filesystem::path pdp_sidecar_path(const std::filesystem::path &csv_path)
    {
        std::filesystem::path p = csv_path;
        p.replace_extension(".meta.json");
        return p;
    }

    void write_pdp_csv(const Pdp &pdp, const std::filesystem::path &path,
                       const std::map<std::string, std::string> &extra_meta)
    {
        std::ostringstream csv;
        csv << "delay_us,power_db,power_linear\n";
        for (std::size_t k = 0; k < pdp.size(); ++k)
            csv << format_fixed6(pdp.delays_us[k]) << ',' << format_fixed6(pdp.power_db[k]) << ','
                << format_fixed6(pdp.power_linear[k]) << '\n';
        write_text_file(path, csv.str());

        nlohmann::ordered_json j;
        j["format"] = pdp_magic;
        j["n_bins"] = pdp.size();
        j["n_averaged"] = pdp.n_averaged;
        if (pdp.noise_floor_db)
            j["noise_floor_db"] = *pdp.noise_floor_db;
        else
            j["noise_floor_db"] = nullptr;
        j["delay_resolution_us"] = pdp.delay_resolution_us();
        j["peak_linear_raw"] = pdp.peak_linear_raw;
        j["extra"] = extra_meta;
        write_text_file(pdp_sidecar_path(path), j.dump(2) + "\n");
    }

    Pdp read_pdp_csv(const std::filesystem::path &path, std::map<std::string, std::string> *extra_meta)
    {
        std::ifstream in(path);
        if (!in)
            throw data_error("FormatError", "cannot read " + path.string());
        std::string line;
        if (!std::getline(in, line) || line.find("delay_us,power_db,power_linear") != 0)
            throw data_error("FormatError", "expected PDP CSV header in " + path.string());

        Pdp pdp;
        std::size_t line_no = 1;
        while (std::getline(in, line))
        {
            ++line_no;
            if (line.empty() || line == "\r")
                continue;
            double d, db, lin;
            if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &d, &db, &lin) != 3)
                throw data_error("FormatError", "bad PDP CSV row at line " + std::to_string(line_no));
            pdp.delays_us.push_back(d);
            pdp.power_db.push_back(db);
            pdp.power_linear.push_back(lin);
        }
        if (pdp.size() == 0)
            throw data_error("FormatError", "PDP CSV has no rows: " + path.string());

        const auto sidecar = pdp_sidecar_path(path);
        if (std::filesystem::exists(sidecar))
        {
            const nlohmann::json j = parse_json_file(sidecar, "PDP sidecar");
            try
            {
                if (j.at("format").get<std::string>() != pdp_magic)
                    throw data_error("FormatError", "bad magic in " + sidecar.string());
                if (j.at("n_bins").get<std::size_t>() != pdp.size())
                    throw data_error("FormatError", "PDP sidecar bin count does not match the CSV");
                pdp.n_averaged = j.at("n_averaged").get<int>();
                if (!j.at("noise_floor_db").is_null())
                    pdp.noise_floor_db = j.at("noise_floor_db").get<double>();
                pdp.peak_linear_raw = j.value("peak_linear_raw", 0.0);
                if (extra_meta && j.contains("extra"))
                    *extra_meta = j.at("extra").get<std::map<std::string, std::string>>();
            }
            catch (const nlohmann::json::exception &e)
            {
                throw data_error("FormatError", "PDP sidecar is missing fields: " + std::string(e.what()));
            }
        }
        return pdp;
    }

    void write_model_csv(const PdpModel &model, double spacing_us, const std::filesystem::path &path)
    {
        if (spacing_us <= 0.0)
            throw domain_error("InvalidArgument", "grid spacing must be positive");
        std::ostringstream csv;
        csv << "delay_us,power_db\n";
        for (long k = 0;; ++k)
        {
            const double tau = k * spacing_us;
            if (tau > model.max_delay_us + 1e-9)
                break;
            csv << format_fixed6(tau) << ',' << format_fixed6(model.eval_alpha(tau)) << '\n';
        }
        write_text_file(path, csv.str());
    }

} // namespace fmsounder
