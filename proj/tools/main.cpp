// groundstate <command> [options]
//
// Exit status: 0 on success, 1 when a solver failed or an enforced check did
// not pass, 2 on invalid configuration.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "groundstate/errors.hpp"
#include "groundstate/experiments.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;

void print_summary(const groundstate::ExperimentReport& report, const std::vector<std::filesystem::path>& written) {
    for (const auto& r : report.records) {
        if (r.error) std::cerr << "error d=" << r.d << " sigma=" << r.sigma << ": " << *r.error << "\n";
    }
    for (const auto& c : report.checks) {
        std::printf("%-4s %-9s %-48s measured=%.10g reference=%.10g %s\n", c.passed ? "PASS" : "FAIL",
                    c.enforced ? "" : "(report)", c.name.c_str(), c.measured, c.reference, c.detail.c_str());
    }
    for (const auto& p : written) std::printf("wrote %s\n", p.string().c_str());
}

const char* describe(groundstate::Command c) {
    using groundstate::Command;
    switch (c) {
        case Command::SweepMax: return "Amplitude alpha(sigma) over a power sweep per dimension";
        case Command::Profiles: return "d = 2 profiles against the Gausson, with crossing radii";
        case Command::SlopeCheck: return "Slope of alpha(sigma)/alpha(0) at sigma = 0";
        case Command::Critical: return "Rescaled profiles w approaching the critical power";
        case Command::EpsilonCurve: return "eps(sigma) by flow and shooting against its linear prediction";
        case Command::Crossing: return "Crossing radius of w against the critical soliton";
        case Command::Validate: return "Closed-form, quadrature and spectral self-checks";
        case Command::OracleCompare: return "Flow ground states against the shooting oracle";
    }
    return "";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radial ground states of the logarithmic-limit NLS family"};
    app.set_version_flag("--version", std::string(groundstate::library_version()));
    app.set_config("--config", "", "INI file with option defaults under a [<subcommand>] section");
    app.require_subcommand(1, 1);

    groundstate::RunConfig config;
    std::vector<double> sigmas;
    std::string sigma_range;
    double R = 0, tau = 0, tol = 0;
    int M = 0;
    long max_iter = 0;
    std::string out_dir = ".";

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--d", config.dims, "Dimensions")->delimiter(',');
        auto* s = sub->add_option("--sigma", sigmas, "Explicit powers")->delimiter(',');
        auto* range = sub->add_option("--sigma-range", sigma_range, "Powers as lo:hi:n");
        s->excludes(range);
        sub->add_option("--R", R, "Truncation radius");
        sub->add_option("--M", M, "Number of grid nodes");
        sub->add_option("--tau", tau, "Pseudo-time step");
        sub->add_option("--tol", tol, "Flow stopping tolerance");
        sub->add_option("--max-iter", max_iter, "Flow iteration cap");
        sub->add_option("--out", out_dir, "Output directory");
        sub->add_option("--threads", config.threads, "Worker threads");
    };
    std::vector<std::pair<CLI::App*, groundstate::Command>> subs;
    for (auto cmd : groundstate::all_commands()) {
        auto* sub = app.add_subcommand(std::string(groundstate::command_name(cmd)), describe(cmd));
        add_common(sub);
        subs.emplace_back(sub, cmd);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalid;
    }

    try {
        for (const auto& [sub, cmd] : subs) {
            if (!sub->parsed()) continue;
            config.command = cmd;
            if (sub->count("--R")) config.R = R;
            if (sub->count("--M")) config.M = M;
            if (sub->count("--tau")) config.tau = tau;
            if (sub->count("--tol")) config.tol = tol;
            if (sub->count("--max-iter")) config.max_iter = max_iter;
        }
        config.sigmas = sigmas;
        if (!sigma_range.empty()) config.sigma_range = groundstate::parse_sigma_range(sigma_range);
        config.out_dir = out_dir;
        config.validate();
    } catch (const groundstate::Error& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitInvalid;
    }

    try {
        const std::string started = groundstate::iso8601_now();
        const auto report = groundstate::run_experiment(config);
        const auto written = groundstate::write_report(report, config, started, groundstate::iso8601_now());
        print_summary(report, written);
        return report.has_solver_failures() || report.has_failed_checks() ? kExitFailure : 0;
    } catch (const groundstate::InvalidConfiguration& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const groundstate::DomainError& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}
