// vps simulate|relax|verify|stability|convergence --config <path> [--out <dir>] [--seed <int>]
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "vps/config.hpp"
#include "vps/errors.hpp"
#include "vps/experiments.hpp"

namespace {

/// One JSON object per line on stderr.
int fail(int code, const std::string& kind, const std::string& message, long step = -1) {
    nlohmann::ordered_json j;
    j["error"] = kind;
    j["message"] = message;
    if (step >= 0) j["step"] = step;
    j["exit"] = code;
    std::cerr << j.dump() << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"viscoelastic phase separation runner"};
    app.require_subcommand(1);
    std::string config_path, out_dir;
    long long seed = -1;
    for (const char* name : {"simulate", "relax", "verify", "stability", "convergence"}) {
        auto* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
        sub->add_option("--config", config_path, "config file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides output_dir)");
        sub->add_option("--seed", seed, "RNG seed (overrides seed)")->check(CLI::NonNegativeNumber);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(1, "UsageError", e.what());
    }

    std::ifstream in(config_path);
    if (!in) return fail(3, "IoError", "cannot read " + config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    try {
        vps::RunConfig cfg = vps::parse_config(text);
        cfg.experiment = vps::parse_experiment(app.get_subcommands().front()->get_name());
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
        vps::validate(cfg);
        int rc = vps::run_experiment(cfg, text);
        if (rc != 0) return fail(rc, "VerifyFailed", "one or more property suites failed; see verify.csv");
        return 0;
    } catch (const vps::ValidationError& e) {
        return fail(1, e.kind(), e.what());
    } catch (const vps::ParseError& e) {
        return fail(1, e.kind(), e.what());
    } catch (const vps::IoError& e) {
        return fail(3, e.kind(), e.what());
    } catch (const vps::StepFailed& e) {
        return fail(2, e.kind(), e.what(), e.step());
    } catch (const vps::Error& e) {
        return fail(2, e.kind(), e.what());
    } catch (const std::exception& e) {
        return fail(2, "Error", e.what());
    }
}
