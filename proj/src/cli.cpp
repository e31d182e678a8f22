#include "intent/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "intent/error.hpp"
#include "intent/scenario.hpp"
#include "intent/server.hpp"
#include "intent/session.hpp"
#include "intent/trace.hpp"

namespace intent::cli {

namespace {

struct Overrides {
    std::optional<double> alpha, beta, gamma, delta;
    std::optional<int> m;
    std::optional<int> samples;
    std::string pattern = "sphere";
    std::optional<double> epsilon_motion;
    std::optional<std::uint64_t> seed;
    bool deterministic = false;
    std::string format = "csv";
};

void add_model_flags(CLI::App& cmd, Overrides& o) {
    cmd.add_option("--alpha", o.alpha, "goal -> Unknown transition probability");
    cmd.add_option("--beta", o.beta, "Unknown -> goal transition probability");
    cmd.add_option("--gamma", o.gamma, "Unknown -> Irrational transition probability");
    cmd.add_option("--delta", o.delta, "Irrational -> Unknown transition probability");
    cmd.add_option("--m", o.m, "rationality window length");
    cmd.add_option("--samples", o.samples, "candidate points per step");
    cmd.add_option("--pattern", o.pattern, "candidate point pattern")->check(CLI::IsMember({"sphere", "circle"}));
    cmd.add_option("--epsilon-motion", o.epsilon_motion, "stationary hand threshold (m)");
}

void add_run_flags(CLI::App& cmd, Overrides& o) {
    add_model_flags(cmd, o);
    cmd.add_option("--seed", o.seed, "override the scenario seed");
    cmd.add_flag("--deterministic", o.deterministic, "omit wall-clock timestamps from headers");
    cmd.add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "jsonl"}));
}

SessionConfig session_config(const Overrides& o) {
    SessionConfig c;
    if (o.alpha) c.params.alpha = *o.alpha;
    if (o.beta) c.params.beta = *o.beta;
    if (o.gamma) c.params.gamma = *o.gamma;
    if (o.delta) c.params.delta = *o.delta;
    if (o.m) c.params.m = *o.m;
    if (o.samples) c.pattern.count = *o.samples;
    if (o.pattern == "circle") c.pattern.shape = PlanarCircle{};
    if (o.epsilon_motion) c.epsilon_motion = *o.epsilon_motion;
    c.validate();
    return c;
}

TraceFormat trace_format(const Overrides& o) { return o.format == "jsonl" ? TraceFormat::Jsonl : TraceFormat::Csv; }

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

TraceMeta header(const std::string& command, const Scenario& sc, const SessionConfig& c, const Overrides& o) {
    TraceMeta meta{{"tool", "intent_cli " INTENT_VERSION},
                   {"command", command},
                   {"scenario", sc.name},
                   {"seed", std::to_string(sc.seed)},
                   {"alpha", format_number(c.params.alpha)},
                   {"beta", format_number(c.params.beta)},
                   {"gamma", format_number(c.params.gamma)},
                   {"delta", format_number(c.params.delta)},
                   {"m", std::to_string(c.params.m)},
                   {"pattern", o.pattern},
                   {"samples", std::to_string(c.pattern.count)},
                   {"epsilon_motion", format_number(c.epsilon_motion)}};
    if (!o.deterministic) {
        meta.emplace_back("generated", utc_now());
    }
    return meta;
}

Scenario load_with_seed(const std::string& ref, const Overrides& o) {
    Scenario sc = resolve_scenario(ref);
    if (o.seed) {
        sc.seed = *o.seed;
    }
    return sc;
}

std::vector<IntentEstimate> replay(const SessionConfig& config, const GoalSet& goals,
                                   std::span<const Observation> observations) {
    Session session(config, goals);
    for (const auto& obs : observations) {
        session.observe(obs);
    }
    return session.export_trace();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw InvalidInputError("cannot open '" + path + "' for writing");
    }
    f << text;
    if (!f) {
        throw InvalidInputError("failed writing '" + path + "'");
    }
}

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos) {
            throw InvalidInputError("invalid sweep value '" + item + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw InvalidInputError("sweep needs at least one value");
    }
    return out;
}

void apply_sweep_value(SessionConfig& c, const std::string& param, double value) {
    if (param == "alpha") {
        c.params.alpha = value;
    } else if (param == "beta") {
        c.params.beta = value;
    } else if (param == "gamma") {
        c.params.gamma = value;
    } else if (param == "delta") {
        c.params.delta = value;
    } else if (param == "m") {
        if (value != static_cast<double>(static_cast<int>(value))) {
            throw InvalidInputError("m must be an integer");
        }
        c.params.m = static_cast<int>(value);
    } else {
        throw InvalidInputError("unknown sweep parameter '" + param + "' (alpha, beta, gamma, delta, m)");
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Goal-intention estimation: replay, sweep, synthesize and serve", "intent_cli"};
    app.set_version_flag("--version", INTENT_VERSION);
    app.require_subcommand(1);

    Overrides o;
    std::string scenario_ref;
    std::string out_path;

    auto* replay_cmd = app.add_subcommand("replay", "run a scenario through the estimator and print the trace");
    std::string observations_path;
    replay_cmd->add_option("scenario", scenario_ref, "scenario file or builtin:<name>")->required();
    replay_cmd->add_option("--observations", observations_path, "replay this observation stream instead");
    replay_cmd->add_option("--out", out_path, "output file (default stdout)");
    add_run_flags(*replay_cmd, o);

    auto* sweep_cmd = app.add_subcommand("sweep", "evaluate summary metrics across values of one parameter");
    std::string param;
    std::string values_text;
    sweep_cmd->add_option("scenario", scenario_ref, "scenario file or builtin:<name>")->required();
    sweep_cmd->add_option("--param", param, "alpha, beta, gamma, delta or m")->required();
    sweep_cmd->add_option("--values", values_text, "comma separated values")->required();
    sweep_cmd->add_option("--out", out_path, "output file (default stdout)");
    add_run_flags(*sweep_cmd, o);

    auto* synth_cmd = app.add_subcommand("synth", "write the scenario's observation stream as JSON lines");
    synth_cmd->add_option("scenario", scenario_ref, "scenario file or builtin:<name>")->required();
    synth_cmd->add_option("--out", out_path, "output file (default stdout)");
    synth_cmd->add_option("--seed", o.seed, "override the scenario seed");

    auto* serve_cmd = app.add_subcommand("serve", "run the WebSocket server");
    std::string bind = "127.0.0.1:8080";
    std::string static_dir;
    int threads = 1;
    serve_cmd->add_option("--bind", bind, "host:port to listen on");
    serve_cmd->add_option("--static-dir", static_dir, "directory served over HTTP");
    serve_cmd->add_option("--threads", threads, "I/O threads")->check(CLI::Range(1, 64));
    serve_cmd->add_option("--seed", o.seed, "robot agent seed");
    add_model_flags(*serve_cmd, o);

    auto* scen_cmd = app.add_subcommand("scenarios", "list or export the builtin scenarios");
    scen_cmd->require_subcommand(1);
    auto* list_cmd = scen_cmd->add_subcommand("list", "print builtin scenario names");
    auto* export_cmd = scen_cmd->add_subcommand("export", "write builtin scenarios as JSON files");
    std::string export_dir = "scenarios";
    export_cmd->add_option("--dir", export_dir, "target directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << INTENT_VERSION << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }

    try {
        if (replay_cmd->parsed()) {
            const SessionConfig config = session_config(o);
            const Scenario sc = load_with_seed(scenario_ref, o);
            TraceMeta meta = header("replay", sc, config, o);
            std::vector<Observation> observations;
            if (observations_path.empty()) {
                observations = synthesize(sc);
            } else {
                std::ifstream in(observations_path);
                if (!in) {
                    throw InvalidInputError("cannot open '" + observations_path + "'");
                }
                observations = read_observations(in);
                meta.emplace_back("observations", observations_path);
            }
            const auto trace = replay(config, sc.goals, observations);
            emit(format_trace(trace, meta, trace_format(o)), out_path, out);
        } else if (sweep_cmd->parsed()) {
            const std::vector<double> values = parse_values(values_text);
            const SessionConfig base = session_config(o);
            const Scenario sc = load_with_seed(scenario_ref, o);
            const auto observations = synthesize(sc);
            std::vector<SweepMetrics> rows;
            for (double value : values) {
                SessionConfig c = base;
                apply_sweep_value(c, param, value);
                c.validate();
                rows.push_back(compute_metrics(sc, replay(c, sc.goals, observations), value));
            }
            TraceMeta meta = header("sweep", sc, base, o);
            meta.emplace_back("parameter", param);
            emit(format_sweep(rows, param, sc.goals, meta, trace_format(o)), out_path, out);
        } else if (synth_cmd->parsed()) {
            const Scenario sc = load_with_seed(scenario_ref, o);
            std::ostringstream os;
            const auto observations = synthesize(sc);
            write_observations(os, observations);
            emit(os.str(), out_path, out);
        } else if (serve_cmd->parsed()) {
            ServerOptions options;
            std::tie(options.address, options.port) = parse_bind_address(bind);
            if (!static_dir.empty()) {
                options.static_dir = static_dir;
            }
            options.threads = threads;
            options.stop_on_signals = true;
            options.connection.session = session_config(o);
            options.connection.seed = o.seed.value_or(0);
            try {
                Server server(options);
                err << "listening on " << options.address << ':' << server.port() << '\n';
                server.run();
            } catch (const BindError& e) {
                err << "error: " << e.what() << '\n';
                return kExitBind;
            }
        } else if (list_cmd->parsed()) {
            for (const auto& [name, sc] : builtin_scenarios()) {
                out << name << '\t' << sc.sample_count() << " samples\n";
            }
        } else if (export_cmd->parsed()) {
            std::filesystem::create_directories(export_dir);
            for (const auto& [name, sc] : builtin_scenarios()) {
                const auto path = std::filesystem::path(export_dir) / (name + ".json");
                save_scenario(sc, path);
                out << path.string() << '\n';
            }
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    return kExitOk;
}

}  // namespace intent::cli
