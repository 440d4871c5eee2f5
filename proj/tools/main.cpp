#include <cstdio>

#include <CLI11.hpp>

#include "stripcap/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"2D MoM per-unit-length capacitance solver for multiconductor microstrips"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string method = "both";
    int threads = 0;
    bool fail_on_nonphysical = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--out", out_dir, "output directory (overrides the config)");
        sub->add_option("--threads", threads, "assembly threads (0 = all cores)");
        sub->add_flag("--fail-on-nonphysical", fail_on_nonphysical,
                      "exit nonzero when the audited matrix is not physical");
        return sub;
    };

    auto* solve = add_common(app.add_subcommand("solve", "single solve on a fixed mesh"));
    auto* converge =
        add_common(app.add_subcommand("converge", "adaptive refinement to tolerance"));
    auto* sweep = add_common(app.add_subcommand("sweep", "multivariate parameter sweep"));
    sweep->add_option("--method", method, "1, 2 or both")
        ->check(CLI::IsMember({"1", "2", "both"}));
    auto* audit_cmd = add_common(app.add_subcommand("audit", "physicality audit of a CSV matrix"));
    auto* diffmask =
        add_common(app.add_subcommand("diffmask", "change mask of two adjacent sweep points"));

    CLI11_PARSE(app, argc, argv);

    try {
        stripcap::RunConfig config = stripcap::parse_config(config_path);
        auto expect_mode = [&](stripcap::Mode m, const char* name) {
            if (config.mode != m)
                throw stripcap::ConfigError(std::string("config mode does not match the '") +
                                            name + "' subcommand");
        };
        if (solve->parsed()) expect_mode(stripcap::Mode::Solve, "solve");
        if (converge->parsed()) expect_mode(stripcap::Mode::Converge, "converge");
        if (sweep->parsed()) expect_mode(stripcap::Mode::Sweep, "sweep");
        if (audit_cmd->parsed()) expect_mode(stripcap::Mode::Audit, "audit");
        if (diffmask->parsed()) expect_mode(stripcap::Mode::DiffMask, "diffmask");

        if (!out_dir.empty()) config.output_dir = out_dir;
        config.method = method;
        config.threads = threads;
        config.fail_on_nonphysical = fail_on_nonphysical;
        return stripcap::run(config);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
