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
//
// Batch front end for the sounding pipeline. Exit codes: 0 success,
// 2 usage error, 3 data/format error, 4 numeric/domain error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fmsounder/emulator.hpp"
#include "fmsounder/errors.hpp"
#include "fmsounder/estimator.hpp"
#include "fmsounder/io.hpp"
#include "fmsounder/metrics.hpp"
#include "fmsounder/models.hpp"
#include "fmsounder/waveform.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace
{

    std::string read_file(const fs::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw fmsounder::data_error("FormatError", "cannot read " + path.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    void write_file(const fs::path &path, const std::string &text)
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw fmsounder::data_error("FormatError", "cannot write " + path.string());
        out << text;
    }

    fmsounder::PdpModel resolve_model(const std::string &ref)
    {
        if (ref == "bad-urban" || ref == "bad_urban")
            return fmsounder::builtin_bad_urban();
        if (ref == "hilly" || ref == "hilly-terrain" || ref == "hilly_terrain")
            return fmsounder::builtin_hilly();
        if (fs::exists(ref))
            return fmsounder::load_model(read_file(ref));
        throw fmsounder::data_error("UnknownModel",
                                    "'" + ref + "' is neither a built-in model (bad-urban, hilly) nor a config file");
    }

    std::vector<int> parse_taps(const std::string &text)
    {
        std::vector<int> taps;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ','))
        {
            try
            {
                taps.push_back(std::stoi(item));
            }
            catch (const std::exception &)
            {
                throw fmsounder::domain_error("InvalidArgument", "cannot parse tap list '" + text + "'");
            }
        }
        return taps;
    }

    std::uint64_t parse_seed(const std::string &text)
    {
        try
        {
            return std::stoull(text, nullptr, 0); // accepts 0x... and decimal
        }
        catch (const std::exception &)
        {
            throw fmsounder::domain_error("InvalidArgument", "cannot parse seed '" + text + "'");
        }
    }

    fmsounder::FadingMode parse_fading(const std::string &text)
    {
        if (text == "static")
            return fmsounder::FadingMode::static_phase;
        if (text == "block-rayleigh" || text == "block_rayleigh")
            return fmsounder::FadingMode::block_rayleigh;
        throw fmsounder::domain_error("InvalidArgument", "fading mode must be 'static' or 'block-rayleigh'");
    }

    std::string fmt(double v, const char *spec = "%.6g")
    {
        char buf[64];
        std::snprintf(buf, sizeof(buf), spec, v);
        return buf;
    }

    // ---------------------------------------------------------- generate

    struct GenerateArgs
    {
        int order = 10;
        std::string taps;
        std::string seed = "0x1F3";
        int pad = 77;
        int reps = 200;
        double rate = 1.0e6;
        std::string out = "tx.iq";
    };

    fs::path sequence_sidecar_path(const fs::path &capture_path)
    {
        fs::path p = capture_path;
        p.replace_extension(".seq.json");
        return p;
    }

    void run_generate(const GenerateArgs &a)
    {
        const std::vector<int> taps =
            a.taps.empty() ? fmsounder::default_feedback_taps(a.order) : parse_taps(a.taps);
        const auto seq = fmsounder::generate_msequence(a.order, taps, parse_seed(a.seed), a.pad, a.rate);
        const auto tx = fmsounder::frame_transmit_stream(seq, a.reps);

        fmsounder::IqCapture cap;
        cap.samples = tx;
        cap.sample_rate_hz = seq.chip_rate_hz;
        cap.capture_id = "mseq-m" + std::to_string(seq.order) + "-reps" + std::to_string(a.reps);
        cap.provenance = "emulated";
        cap.extra["order"] = std::to_string(seq.order);
        cap.extra["frame_len"] = std::to_string(seq.frame_len());
        cap.extra["repetitions"] = std::to_string(a.reps);
        fmsounder::write_capture(cap, a.out);
        write_file(sequence_sidecar_path(a.out), fmsounder::sequence_to_json(seq));

        std::cout << "wrote " << a.out << " (" << tx.size() << " samples, frame " << seq.frame_len() << " = "
                  << seq.length() << " chips + " << seq.pad_len << " pad)\n"
                  << "wrote " << sequence_sidecar_path(a.out).string() << "\n";
    }

    // ---------------------------------------------------------- model

    void run_model_eval(const std::string &model_ref, double tau)
    {
        const auto model = resolve_model(model_ref);
        std::cout << fmt(model.eval_alpha(tau)) << "\n";
    }

    void run_model_export(const std::string &model_ref, double spacing, const std::string &out)
    {
        const auto model = resolve_model(model_ref);
        fmsounder::write_model_csv(model, spacing, out);
        std::cout << "wrote " << out << "\n";
    }

    void run_model_show(const std::string &model_ref)
    {
        std::cout << fmsounder::model_to_json(resolve_model(model_ref));
    }

    // ---------------------------------------------------------- emulate

    struct EmulateArgs
    {
        std::string model;
        double spacing_us = 1.0;
        double min_db = -40.0;
        double snr_db = std::numeric_limits<double>::infinity();
        std::string fading = "static";
        std::string seed = "42";
        bool include_floor = false;
        bool normalize = false;
        std::string in = "tx.iq";
        std::string out = "rx.iq";
    };

    void run_emulate(const EmulateArgs &a)
    {
        const auto model = resolve_model(a.model);
        const auto tx = fmsounder::read_capture(a.in);
        const std::uint64_t seed = parse_seed(a.seed);

        int frame_len = 1100;
        if (auto it = tx.extra.find("frame_len"); it != tx.extra.end())
            frame_len = std::stoi(it->second);

        const auto taps = fmsounder::sample_taps(
            model, a.spacing_us, a.min_db,
            a.normalize ? fmsounder::TapNormalization::unit_total_power : fmsounder::TapNormalization::none,
            a.include_floor);
        const auto channel =
            fmsounder::realize_channel(taps, tx.sample_rate_hz, parse_fading(a.fading), seed, frame_len);
        auto rx_samples = fmsounder::apply_channel(tx.samples, channel);
        if (std::isfinite(a.snr_db))
            rx_samples = fmsounder::add_awgn(rx_samples, a.snr_db, seed + 1); // noise stream = seed + 1

        fmsounder::IqCapture rx;
        rx.samples = std::move(rx_samples);
        rx.sample_rate_hz = tx.sample_rate_hz;
        rx.center_freq_hz = tx.center_freq_hz;
        rx.capture_id = "emulated-" + model.name + "-seed" + std::to_string(seed);
        rx.provenance = "emulated";
        rx.extra = tx.extra;
        rx.extra["model"] = model.name;
        rx.extra["seed"] = std::to_string(seed);
        rx.extra["snr_db"] = std::isfinite(a.snr_db) ? fmt(a.snr_db) : "inf";
        rx.extra["fading"] = a.fading;
        rx.extra["spacing_us"] = fmt(a.spacing_us);
        rx.extra["min_power_db"] = fmt(a.min_db);
        fmsounder::write_capture(rx, a.out);

        std::cout << "wrote " << a.out << " (" << rx.samples.size() << " samples, " << taps.size()
                  << " taps, snr " << (std::isfinite(a.snr_db) ? fmt(a.snr_db) + " dB" : std::string("off"))
                  << ")\n";
    }

    // ---------------------------------------------------------- estimate

    struct EstimateArgs
    {
        std::string in = "rx.iq";
        std::string seq = "tx.seq.json";
        double window_us = 100.0;
        std::string averaging = "magnitude";
        std::string out = "pdp.csv";
    };

    struct EstimateResult
    {
        fmsounder::Pdp pdp;
        std::size_t offset = 0;
    };

    EstimateResult estimate_pdp(const fmsounder::IqCapture &rx, const fmsounder::SoundingSequence &seq,
                                double window_us, fmsounder::AveragingMode mode)
    {
        if (std::abs(rx.sample_rate_hz - seq.chip_rate_hz) > 1e-6 * seq.chip_rate_hz)
            throw fmsounder::domain_error("InvalidArgument",
                                          "capture sample rate does not match the sequence chip rate "
                                          "(one sample per chip is assumed)");
        const auto corr = fmsounder::sliding_correlate(rx.samples, seq);
        const std::size_t offset = fmsounder::align(corr, seq.frame_len());
        const int window = static_cast<int>(std::lround(window_us * rx.sample_rate_hz / 1.0e6));
        const auto avg = fmsounder::average_cirs(corr, seq.frame_len(), offset, window, mode);
        auto pdp = fmsounder::to_pdp(avg, 1.0e6 / rx.sample_rate_hz);
        pdp.noise_floor_db = fmsounder::estimate_noise_floor(pdp);
        return {std::move(pdp), offset};
    }

    void run_estimate(const EstimateArgs &a)
    {
        const auto rx = fmsounder::read_capture(a.in);
        const auto seq = fmsounder::sequence_from_json(read_file(a.seq));
        const auto mode = (a.averaging == "power") ? fmsounder::AveragingMode::power
                                                   : fmsounder::AveragingMode::magnitude;
        const auto res = estimate_pdp(rx, seq, a.window_us, mode);

        std::map<std::string, std::string> extra;
        extra["offset"] = std::to_string(res.offset);
        extra["averaging"] = a.averaging;
        extra["source_capture"] = rx.capture_id;
        fmsounder::write_pdp_csv(res.pdp, a.out, extra);

        std::cout << "wrote " << a.out << " (offset " << res.offset << ", " << res.pdp.n_averaged
                  << " frames averaged, floor " << fmt(*res.pdp.noise_floor_db, "%.2f") << " dB)\n";
    }

    // ---------------------------------------------------------- metrics

    struct MetricsArgs
    {
        std::string in = "pdp.csv";
        double threshold_db = fmsounder::default_threshold_db;
        double x_db = 25.0;
        double gap_us = fmsounder::default_cluster_gap_us;
        double rise_db = fmsounder::default_cluster_rise_db;
        bool json = false;
        std::string out;
    };

    ordered_json metrics_json(const fmsounder::Pdp &pdp, const fmsounder::TapSet &taps, double threshold_db,
                              double x_db, double gap_us, double rise_db)
    {
        ordered_json j;
        j["n_taps"] = taps.size();
        j["noise_floor_db"] = pdp.noise_floor_db ? ordered_json(*pdp.noise_floor_db) : ordered_json(nullptr);
        j["threshold_db"] = threshold_db;
        j["n_averaged"] = pdp.n_averaged;
        if (!taps.empty())
        {
            const double rms = fmsounder::rms_delay_spread_us(taps);
            j["mean_excess_delay_us"] = fmsounder::mean_excess_delay_us(taps);
            j["rms_delay_spread_us"] = rms;
            j["max_excess_delay_us"] = fmsounder::max_excess_delay_us(taps, x_db);
            j["x_db"] = x_db;
            j["coherence_bandwidth_hz"] =
                rms > 0.0 ? ordered_json(fmsounder::coherence_bandwidth_hz(rms)) : ordered_json(nullptr);
            j["cluster_count"] = fmsounder::cluster_count(taps, gap_us, rise_db);
        }
        else
        {
            j["mean_excess_delay_us"] = nullptr;
            j["rms_delay_spread_us"] = nullptr;
            j["max_excess_delay_us"] = nullptr;
            j["x_db"] = x_db;
            j["coherence_bandwidth_hz"] = nullptr;
            j["cluster_count"] = 0;
        }
        j["cluster_gap_us"] = gap_us;
        j["cluster_rise_db"] = rise_db;
        return j;
    }

    void print_metrics_table(const ordered_json &j)
    {
        auto num = [&](const char *key, const char *unit, const char *spec = "%.4f") {
            if (j.at(key).is_null())
                return std::string("n/a");
            return fmt(j.at(key).get<double>(), spec) + " " + unit;
        };
        std::cout << "taps detected       : " << j.at("n_taps").get<std::size_t>() << "\n"
                  << "noise floor         : " << num("noise_floor_db", "dB", "%.2f") << "\n"
                  << "mean excess delay   : " << num("mean_excess_delay_us", "us") << "\n"
                  << "rms delay spread    : " << num("rms_delay_spread_us", "us") << "\n"
                  << "max excess delay    : " << num("max_excess_delay_us", "us") << " (within "
                  << fmt(j.at("x_db").get<double>(), "%.1f") << " dB of peak)\n"
                  << "coherence bandwidth : " << num("coherence_bandwidth_hz", "Hz", "%.1f") << "\n"
                  << "clusters            : " << j.at("cluster_count").get<int>() << "\n";
    }

    void run_metrics(const MetricsArgs &a)
    {
        auto pdp = fmsounder::read_pdp_csv(a.in);
        if (!pdp.noise_floor_db)
            pdp.noise_floor_db = fmsounder::estimate_noise_floor(pdp);
        const auto taps = fmsounder::extract_taps(pdp, a.threshold_db);
        const auto j = metrics_json(pdp, taps, a.threshold_db, a.x_db, a.gap_us, a.rise_db);
        if (!a.out.empty())
            write_file(a.out, j.dump(2) + "\n");
        if (a.json)
            std::cout << j.dump(2) << "\n";
        else
            print_metrics_table(j);
    }

    // ---------------------------------------------------------- compare

    struct CompareArgs
    {
        std::string pdp = "pdp.csv";
        std::string model;
        double threshold_db = fmsounder::default_threshold_db;
        double gap_us = fmsounder::default_cluster_gap_us;
        double rise_db = fmsounder::default_cluster_rise_db;
        bool json = false;
        std::string out;
    };

    ordered_json compare_json(const fmsounder::CompareReport &rep, const std::string &model_name)
    {
        ordered_json j;
        j["model"] = model_name;
        j["rmse_db"] = rep.rmse_db;
        j["n_compared"] = rep.n_compared;
        j["noise_floor_db"] = rep.noise_floor_db;
        j["threshold_db"] = rep.threshold_db;
        j["pdp_cluster_count"] = rep.pdp_cluster_count;
        j["model_cluster_count"] = rep.model_cluster_count;
        j["cluster_deltas"] = ordered_json::array();
        for (const auto &d : rep.cluster_deltas)
        {
            ordered_json dj;
            dj["index"] = d.index;
            dj["pdp_peak_delay_us"] = d.pdp_peak_delay_us;
            dj["pdp_peak_db"] = d.pdp_peak_db;
            dj["model_peak_delay_us"] = d.model_peak_delay_us;
            dj["model_peak_db"] = d.model_peak_db;
            dj["delta_db"] = d.delta_db;
        }
        return j;
    }

    std::string residuals_csv(const fmsounder::CompareReport &rep)
    {
        std::ostringstream csv;
        csv << "delay_us,pdp_db,model_db,residual_db\n";
        for (const auto &r : rep.residuals)
            csv << fmt(r.delay_us, "%.6f") << ',' << fmt(r.pdp_db, "%.6f") << ',' << fmt(r.model_db, "%.6f")
                << ',' << fmt(r.residual_db, "%.6f") << '\n';
        return csv.str();
    }

    void run_compare(const CompareArgs &a)
    {
        auto pdp = fmsounder::read_pdp_csv(a.pdp);
        if (!pdp.noise_floor_db)
            pdp.noise_floor_db = fmsounder::estimate_noise_floor(pdp);
        const auto model = resolve_model(a.model);
        const auto rep = fmsounder::compare(pdp, model, a.threshold_db, a.gap_us, a.rise_db);
        if (!a.out.empty())
            write_file(a.out, residuals_csv(rep));
        if (a.json)
            std::cout << compare_json(rep, model.name).dump(2) << "\n";
        else
        {
            std::cout << "model           : " << model.name << "\n"
                      << "rmse            : " << fmt(rep.rmse_db, "%.4f") << " dB over " << rep.n_compared
                      << " bins\n"
                      << "clusters        : pdp " << rep.pdp_cluster_count << ", model "
                      << rep.model_cluster_count << "\n";
            for (const auto &d : rep.cluster_deltas)
                std::cout << "cluster " << d.index << " delta : " << fmt(d.delta_db, "%+.3f") << " dB (pdp "
                          << fmt(d.pdp_peak_db, "%.2f") << " @ " << fmt(d.pdp_peak_delay_us, "%.1f")
                          << " us, model " << fmt(d.model_peak_db, "%.2f") << " @ "
                          << fmt(d.model_peak_delay_us, "%.1f") << " us)\n";
        }
    }

    // ---------------------------------------------------------- pipeline

    struct PipelineArgs
    {
        std::string model;
        double snr_db = 30.0;
        std::string seed = "7";
        int reps = 200;
        double spacing_us = 1.0;
        double min_db = -40.0;
        std::string fading = "static";
        double window_us = 100.0;
        double threshold_db = fmsounder::default_threshold_db;
        double x_db = 25.0;
        double gap_us = fmsounder::default_cluster_gap_us;
        double rise_db = fmsounder::default_cluster_rise_db;
        std::string out;
        bool json = false;
    };

    void run_pipeline(const PipelineArgs &a)
    {
        fs::path outdir;
        if (!a.out.empty())
            outdir = a.out;
        else if (const char *env = std::getenv("FMSOUNDER_OUT_DIR"))
            outdir = env;
        else
            outdir = ".";
        fs::create_directories(outdir);

        const auto model = resolve_model(a.model);
        const std::uint64_t seed = parse_seed(a.seed);

        // transmit
        const auto seq = fmsounder::generate_msequence(10, fmsounder::default_feedback_taps(10), fmsounder::default_m10_seed);
        const auto tx_samples = fmsounder::frame_transmit_stream(seq, a.reps);
        fmsounder::IqCapture tx;
        tx.samples = tx_samples;
        tx.sample_rate_hz = seq.chip_rate_hz;
        tx.capture_id = "mseq-m10-reps" + std::to_string(a.reps);
        tx.extra["frame_len"] = std::to_string(seq.frame_len());
        fmsounder::write_capture(tx, outdir / "tx.iq");
        write_file(outdir / "seq.json", fmsounder::sequence_to_json(seq));

        // channel + noise
        const auto taps = fmsounder::sample_taps(model, a.spacing_us, a.min_db);
        const auto channel =
            fmsounder::realize_channel(taps, seq.chip_rate_hz, parse_fading(a.fading), seed, seq.frame_len());
        auto rx_samples = fmsounder::apply_channel(tx.samples, channel);
        if (std::isfinite(a.snr_db))
            rx_samples = fmsounder::add_awgn(rx_samples, a.snr_db, seed + 1);
        fmsounder::IqCapture rx;
        rx.samples = std::move(rx_samples);
        rx.sample_rate_hz = seq.chip_rate_hz;
        rx.capture_id = "emulated-" + model.name + "-seed" + std::to_string(seed);
        rx.extra["model"] = model.name;
        rx.extra["seed"] = std::to_string(seed);
        rx.extra["snr_db"] = std::isfinite(a.snr_db) ? fmt(a.snr_db) : "inf";
        rx.extra["fading"] = a.fading;
        fmsounder::write_capture(rx, outdir / "rx.iq");

        // estimate
        const auto res = estimate_pdp(rx, seq, a.window_us, fmsounder::AveragingMode::magnitude);
        std::map<std::string, std::string> pdp_extra;
        pdp_extra["offset"] = std::to_string(res.offset);
        pdp_extra["model"] = model.name;
        fmsounder::write_pdp_csv(res.pdp, outdir / "pdp.csv", pdp_extra);

        // metrics + compare
        const auto extracted = fmsounder::extract_taps(res.pdp, a.threshold_db);
        const auto mj = metrics_json(res.pdp, extracted, a.threshold_db, a.x_db, a.gap_us, a.rise_db);
        const auto rep = fmsounder::compare(res.pdp, model, a.threshold_db, a.gap_us, a.rise_db);
        write_file(outdir / "compare.csv", residuals_csv(rep));

        ordered_json report;
        report["model"] = model.name;
        report["seed"] = seed;
        report["snr_db"] = std::isfinite(a.snr_db) ? ordered_json(a.snr_db) : ordered_json(nullptr);
        report["fading"] = a.fading;
        report["repetitions"] = a.reps;
        report["spacing_us"] = a.spacing_us;
        report["min_power_db"] = a.min_db;
        report["window_us"] = a.window_us;
        report["estimate"] = {{"offset", res.offset},
                              {"n_averaged", res.pdp.n_averaged},
                              {"noise_floor_db", *res.pdp.noise_floor_db}};
        report["taps"] = ordered_json::array();
        for (const auto &t : extracted.taps)
            report["taps"].push_back({{"delay_us", t.delay_us}, {"power_db", t.power_db}});
        report["metrics"] = mj;
        report["compare"] = compare_json(rep, model.name);
        report["files"] = {{"sequence", "seq.json"}, {"tx", "tx.iq"},          {"rx", "rx.iq"},
                           {"pdp", "pdp.csv"},       {"residuals", "compare.csv"}};
        write_file(outdir / "report.json", report.dump(2) + "\n");

        if (a.json)
            std::cout << report.dump(2) << "\n";
        else
            std::cout << "model          : " << model.name << "\n"
                      << "taps recovered : " << extracted.size() << " (" << rep.pdp_cluster_count
                      << " clusters)\n"
                      << "noise floor    : " << fmt(*res.pdp.noise_floor_db, "%.2f") << " dB\n"
                      << "compare rmse   : " << fmt(rep.rmse_db, "%.4f") << " dB over " << rep.n_compared
                      << " bins\n"
                      << "report         : " << (outdir / "report.json").string() << "\n";
    }

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"FM-band channel sounding toolkit: m-sequence generation, multipath emulation,\n"
                 "cross-correlation PDP estimation and dispersion metrics"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto *c_gen = app.add_subcommand("generate", "Generate the m-sequence transmit capture");
    c_gen->add_option("--m", gen.order, "LFSR register length")->capture_default_str();
    c_gen->add_option("--taps", gen.taps, "Feedback polynomial exponents, e.g. 10,3 (default: built-in table)");
    c_gen->add_option("--seed", gen.seed, "LFSR seed (hex or decimal)")->capture_default_str();
    c_gen->add_option("--pad", gen.pad, "Trailing zeros per frame")->capture_default_str();
    c_gen->add_option("--reps", gen.reps, "Number of repeated frames")->capture_default_str();
    c_gen->add_option("--rate", gen.rate, "Chip rate in Hz")->capture_default_str();
    c_gen->add_option("-o,--out", gen.out, "Output capture path")->capture_default_str();

    std::string model_ref;
    double model_tau = 0.0;
    double model_spacing = 0.1;
    std::string model_out = "model.csv";
    auto *c_model = app.add_subcommand("model", "Evaluate or export analytic PDP models");
    c_model->require_subcommand(1);
    auto *c_eval = c_model->add_subcommand("eval", "Print model power (dB) at a delay");
    c_eval->add_option("--model", model_ref, "bad-urban | hilly | config path")->required();
    c_eval->add_option("--tau", model_tau, "Delay in microseconds")->required();
    auto *c_export = c_model->add_subcommand("export", "Export model power on a delay grid as CSV");
    c_export->add_option("--model", model_ref, "bad-urban | hilly | config path")->required();
    c_export->add_option("--spacing", model_spacing, "Grid spacing in microseconds")->capture_default_str();
    c_export->add_option("-o,--out", model_out, "Output CSV path")->capture_default_str();
    auto *c_show = c_model->add_subcommand("show", "Print the model config JSON");
    c_show->add_option("--model", model_ref, "bad-urban | hilly | config path")->required();

    EmulateArgs emu;
    auto *c_emu = app.add_subcommand("emulate", "Apply a multipath channel and noise to a capture");
    c_emu->add_option("--model", emu.model, "bad-urban | hilly | config path")->required();
    c_emu->add_option("--spacing-us", emu.spacing_us, "Tap grid spacing")->capture_default_str();
    c_emu->add_option("--min-db", emu.min_db, "Drop taps below this relative power")->capture_default_str();
    c_emu->add_option("--snr-db", emu.snr_db, "Post-channel SNR (inf disables noise)")->capture_default_str();
    c_emu->add_option("--fading", emu.fading, "static | block-rayleigh")->capture_default_str();
    c_emu->add_option("--seed", emu.seed, "Channel seed (noise stream uses seed+1)")->capture_default_str();
    c_emu->add_flag("--include-floor", emu.include_floor, "Keep grid taps in model floor regions");
    c_emu->add_flag("--normalize", emu.normalize, "Normalize the tap set to unit total power");
    c_emu->add_option("-i,--in", emu.in, "Input transmit capture")->capture_default_str();
    c_emu->add_option("-o,--out", emu.out, "Output received capture")->capture_default_str();

    EstimateArgs est;
    auto *c_est = app.add_subcommand("estimate", "Estimate the PDP from a received capture");
    c_est->add_option("-i,--in", est.in, "Input received capture")->capture_default_str();
    c_est->add_option("--seq", est.seq, "Sequence spec JSON")->capture_default_str();
    c_est->add_option("--window-us", est.window_us, "CIR window length")->capture_default_str();
    c_est->add_option("--averaging", est.averaging, "magnitude | power")->capture_default_str();
    c_est->add_option("-o,--out", est.out, "Output PDP CSV")->capture_default_str();

    MetricsArgs met;
    auto *c_met = app.add_subcommand("metrics", "Dispersion metrics from an estimated PDP");
    c_met->add_option("-i,--in", met.in, "Input PDP CSV")->capture_default_str();
    c_met->add_option("--threshold-db", met.threshold_db, "Tap threshold above noise floor")
        ->capture_default_str();
    c_met->add_option("--x-db", met.x_db, "Dynamic range for max excess delay")->capture_default_str();
    c_met->add_option("--gap-us", met.gap_us, "Cluster gap")->capture_default_str();
    c_met->add_option("--rise-db", met.rise_db, "Cluster power-rise break")->capture_default_str();
    c_met->add_flag("--json", met.json, "Emit JSON instead of a table");
    c_met->add_option("-o,--out", met.out, "Also write the JSON report to a file");

    CompareArgs cmp;
    auto *c_cmp = app.add_subcommand("compare", "Compare an estimated PDP against a model");
    c_cmp->add_option("--pdp", cmp.pdp, "Input PDP CSV")->capture_default_str();
    c_cmp->add_option("--model", cmp.model, "bad-urban | hilly | config path")->required();
    c_cmp->add_option("--threshold-db", cmp.threshold_db, "Comparison threshold above noise floor")
        ->capture_default_str();
    c_cmp->add_option("--gap-us", cmp.gap_us, "Cluster gap")->capture_default_str();
    c_cmp->add_option("--rise-db", cmp.rise_db, "Cluster power-rise break")->capture_default_str();
    c_cmp->add_flag("--json", cmp.json, "Emit JSON instead of text");
    c_cmp->add_option("-o,--out", cmp.out, "Write per-delay residuals CSV");

    PipelineArgs pipe;
    auto *c_pipe = app.add_subcommand("pipeline", "Run generate -> emulate -> estimate -> metrics/compare");
    c_pipe->add_option("--model", pipe.model, "bad-urban | hilly | config path")->required();
    c_pipe->add_option("--snr-db", pipe.snr_db, "Post-channel SNR (inf disables noise)")->capture_default_str();
    c_pipe->add_option("--seed", pipe.seed, "Channel seed")->capture_default_str();
    c_pipe->add_option("--reps", pipe.reps, "Number of repeated frames")->capture_default_str();
    c_pipe->add_option("--spacing-us", pipe.spacing_us, "Tap grid spacing")->capture_default_str();
    c_pipe->add_option("--min-db", pipe.min_db, "Emulation dynamic range")->capture_default_str();
    c_pipe->add_option("--fading", pipe.fading, "static | block-rayleigh")->capture_default_str();
    c_pipe->add_option("--window-us", pipe.window_us, "CIR window length")->capture_default_str();
    c_pipe->add_option("--threshold-db", pipe.threshold_db, "Tap/compare threshold above floor")
        ->capture_default_str();
    c_pipe->add_option("--x-db", pipe.x_db, "Dynamic range for max excess delay")->capture_default_str();
    c_pipe->add_option("--gap-us", pipe.gap_us, "Cluster gap")->capture_default_str();
    c_pipe->add_option("--rise-db", pipe.rise_db, "Cluster power-rise break")->capture_default_str();
    c_pipe->add_option("-o,--out", pipe.out, "Output directory (default: $FMSOUNDER_OUT_DIR or .)");
    c_pipe->add_flag("--json", pipe.json, "Print the full report JSON");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        if (e.get_exit_code() == 0) // --help and friends
            return app.exit(e);
        app.exit(e);
        return 2;
    }

    try
    {
        if (*c_gen)
            run_generate(gen);
        else if (*c_eval)
            run_model_eval(model_ref, model_tau);
        else if (*c_export)
            run_model_export(model_ref, model_spacing, model_out);
        else if (*c_show)
            run_model_show(model_ref);
        else if (*c_emu)
            run_emulate(emu);
        else if (*c_est)
            run_estimate(est);
        else if (*c_met)
            run_metrics(met);
        else if (*c_cmp)
            run_compare(cmp);
        else if (*c_pipe)
            run_pipeline(pipe);
    }
    catch (const fmsounder::Error &e)
    {
        ordered_json err;
        err["error"] = e.code();
        err["message"] = e.what();
        std::cerr << err.dump() << "\n";
        return e.category() == fmsounder::Error::Category::data ? 3 : 4;
    }
    catch (const std::exception &e)
    {
        ordered_json err;
        err["error"] = "Internal";
        err["message"] = e.what();
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 0;
}
