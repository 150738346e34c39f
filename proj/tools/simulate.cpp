// simulate - BER sweeps for AFDM-PIM and the reference schemes.
//
//   simulate --config sweep.cfg [overrides...]
//   simulate --preset fig2|fig3|fig4 [overrides...]
//
// Exit codes: 0 success, 2 configuration error, 3 search size guard.

#include "afdm_pim/config_io.hpp"
#include "afdm_pim/presets.hpp"
#include "afdm_pim/sim.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSizeGuard = 3;

std::vector<double> parse_snr_spec(const std::string& spec) {
    // a:b:step
    std::vector<double> parts;
    std::size_t start = 0;
    for (;;) {
        const auto colon = spec.find(':', start);
        parts.push_back(std::stod(spec.substr(start, colon - start)));
        if (colon == std::string::npos) break;
        start = colon + 1;
    }
    if (parts.size() != 3) throw afdm_pim::ConfigError("--snr expects a:b:step, got '" + spec + "'");
    return afdm_pim::snr_range(parts[0], parts[1], parts[2]);
}

}  // namespace

int main(int argc, char** argv) {
    using namespace afdm_pim;

    CLI::App app{"AFDM-PIM link-level BER simulator"};
    std::string config_path, preset_name, snr_spec, out_path, scheme_name, detector_name;
    std::optional<std::uint64_t> seed, frames_max, errors_min;
    std::optional<double> stop_below;
    unsigned threads = 0;
    unsigned paths = 0;
    bool omit_timing = false, quiet = false;

    app.add_option("--config", config_path, "Sweep configuration file (key = value)");
    app.add_option("--preset", preset_name, "Reference comparison to run")->check(CLI::IsMember({"fig2", "fig3", "fig4"}));
    app.add_option("--snr", snr_spec, "Eb/N0 grid in dB as from:to:step");
    app.add_option("--seed", seed, "Master seed");
    app.add_option("--frames-max", frames_max, "Stop rule: maximum frames per SNR point");
    app.add_option("--errors-min", errors_min, "Stop rule: bit errors to collect per SNR point");
    app.add_option("--out", out_path, "Output CSV path (default: <preset>.csv or ber.csv)");
    app.add_option("--scheme", scheme_name, "Scheme override")->check(CLI::IsMember({"afdm-pim", "afdm", "ofdm", "ofdm-im"}));
    app.add_option("--detector", detector_name, "Detector override")->check(CLI::IsMember({"ml", "ml-mmse"}));
    app.add_option("--stop-below", stop_below, "Skip the remaining SNR points once BER drops below this");
    app.add_option("--threads", threads, "Worker threads (0 = all cores)");
    app.add_option("--paths", paths, "Path count P override");
    app.add_flag("--omit-timing", omit_timing, "Write 0 in the wall_time_s column (byte-reproducible CSV)");
    app.add_flag("-q,--quiet", quiet, "No per-point progress on stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (config_path.empty() == preset_name.empty())
            throw ConfigError("exactly one of --config or --preset is required");

        std::vector<SweepConfig> sweeps;
        if (!preset_name.empty()) sweeps = preset_sweeps(preset_from_string(preset_name));
        else sweeps.push_back(load_config(config_path));

        for (auto& s : sweeps) {
            if (!snr_spec.empty()) s.snr_db = parse_snr_spec(snr_spec);
            if (seed) s.seed = *seed;
            if (frames_max) s.stop.max_frames = *frames_max;
            if (errors_min) s.stop.min_errors = *errors_min;
            if (!scheme_name.empty()) s.scheme = scheme_from_string(scheme_name);
            if (!detector_name.empty()) s.detector = detector_from_string(detector_name);
            if (paths) s.channel.paths = paths;
            try {
                s.validate();
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        }
        if (out_path.empty()) out_path = preset_name.empty() ? "ber.csv" : preset_name + ".csv";

        RunOptions opts;
        opts.threads = threads;
        opts.stop_below_ber = stop_below;
        if (!quiet)
            opts.progress = [](const BerRecord& r) {
                std::fprintf(stderr, "%-9s %-8s Eb/N0 %5.1f dB  frames %8llu  errors %7llu  BER %.3e  %.1fs%s\n",
                             r.scheme.c_str(), r.detector.c_str(), r.snr_db, static_cast<unsigned long long>(r.frames),
                             static_cast<unsigned long long>(r.bit_errors), r.ber, r.wall_time_s,
                             r.stop_rule_met ? "" : "  (max frames reached)");
            };

        std::vector<BerRecord> records;
        for (const auto& s : sweeps) {
            auto recs = run_ber_sweep(s, opts);
            records.insert(records.end(), recs.begin(), recs.end());
        }
        write_csv(records, out_path, !omit_timing);
        if (!quiet) std::fprintf(stderr, "wrote %zu records to %s\n", records.size(), out_path.c_str());
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const SizeGuardError& e) {
        std::cerr << "size guard: " << e.what() << "\n";
        return kExitSizeGuard;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
