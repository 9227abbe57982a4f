#include "gridexp/cli.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <ostream>
#include <random>

#include "CLI11.hpp"
#include "gridexp/oracles.hpp"
#include "gridexp/protocols.hpp"
#include "gridexp/service.hpp"
#include "gridexp/trace.hpp"
#include "gridexp/verifier.hpp"

namespace gridexp {

Configuration sample_initial(const GridDims& g, int k, std::uint64_t seed) {
    if (k < 1 || k > g.node_count()) throw InvalidInitial("cannot place " + std::to_string(k) + " robots");
    std::vector<int> nodes(static_cast<std::size_t>(g.node_count()));
    std::iota(nodes.begin(), nodes.end(), 0);
    std::mt19937_64 rng(seed);
    // Partial Fisher-Yates with explicit draws, so the sample does not depend
    // on the standard library's shuffle.
    for (int n = 0; n < k; ++n) {
        auto span = static_cast<std::uint64_t>(g.node_count() - n);
        auto pick = n + static_cast<int>(rng() % span);
        std::swap(nodes[static_cast<std::size_t>(n)], nodes[static_cast<std::size_t>(pick)]);
    }
    Configuration c(g);
    for (int n = 0; n < k; ++n) c.add(nodes[static_cast<std::size_t>(n)], 1);
    return c;
}

std::unique_ptr<Adversary> make_adversary(const std::string& spec, std::uint64_t seed) {
    if (spec == "random") return std::make_unique<RandomAdversary>(seed);
    if (spec == "sequential") return std::make_unique<SequentialAdversary>();
    if (spec == "synchronous") return std::make_unique<SynchronousAdversary>();
    if (spec.rfind("script:", 0) == 0) {
        std::ifstream in(spec.substr(7));
        if (!in) throw ParseError("cannot open script " + spec.substr(7));
        return std::make_unique<ScriptedAdversary>(read_script(in));
    }
    throw ParseError("unknown adversary '" + spec + "'");
}

namespace {

struct Common {
    std::string grid;
    std::string protocol;
    int k = 0;
    std::string model = "atom";
    std::string mode = "weak";
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--grid", c.grid, "grid as IxJ")->required();
    app->add_option("--protocol", c.protocol, "protocol name")->required();
    app->add_option("--k", c.k, "number of robots")->required();
    app->add_option("--model", c.model, "atom or corda");
    app->add_option("--mode", c.mode, "weak or strong multiplicity detection");
}

std::string grid_text(const GridDims& g) { return std::to_string(g.i) + "x" + std::to_string(g.j); }

int do_run(const Common& c, const std::string& initial_text, const std::string& adversary, std::uint64_t seed,
           int max_steps, const std::string& trace_path, std::ostream& out) {
    auto g = parse_grid(c.grid);
    const auto& info = find_protocol(c.protocol);
    check_instance(info.name, g, c.k);
    auto model = parse_model(c.model);
    auto mode = parse_multiplicity(c.mode);
    Configuration initial = initial_text.empty() ? sample_initial(g, c.k, seed) : parse_configuration(g, initial_text);
    if (initial.robot_count() != c.k)
        throw InvalidInitial("initial configuration has " + std::to_string(initial.robot_count()) + " robots, --k is " +
                             std::to_string(c.k));
    Engine engine(info.fn);
    auto s0 = engine.init(initial, model, mode);
    auto adv = make_adversary(adversary, seed);
    auto result = run(engine, s0, *adv, RunLimits{max_steps});
    if (!trace_path.empty()) {
        std::ofstream f(trace_path);
        if (!f) throw ParseError("cannot write " + trace_path);
        Trace t{{g, c.k, info.name, model, mode, initial, seed}, result.events};
        write_trace(f, t);
    }
    const auto& fs = result.final_state;
    bool ok = result.explored && result.quiescent;
    out << (ok ? "explored" : "not explored") << ": protocol=" << info.name << " grid=" << grid_text(g)
        << " k=" << c.k << " model=" << to_string(model) << " initial=\"" << format_configuration(initial)
        << "\" steps=" << result.events.size() << " visited=" << popcount(fs.visited) << "/" << g.node_count()
        << " quiescent=" << (result.quiescent ? "yes" : "no") << (result.timed_out ? " (step limit reached)" : "")
        << "\n";
    out << "final=\"" << format_configuration(fs.config) << "\"\n";
    return ok ? kOk : kFailed;
}

int do_verify(const Common& c, std::size_t budget, int jobs, const std::string& report_path,
              const std::string& trace_path, bool no_canon, std::ostream& out) {
    auto g = parse_grid(c.grid);
    const auto& info = find_protocol(c.protocol);
    check_instance(info.name, g, c.k);
    VerifyOptions opt;
    opt.model = parse_model(c.model);
    opt.mode = parse_multiplicity(c.mode);
    opt.budget = budget;
    opt.jobs = jobs;
    opt.canonicalize = !no_canon;
    auto report = verify_exhaustive(g, c.k, info.name, info.fn, opt);
    auto json = to_json(report);
    if (!report_path.empty()) {
        std::ofstream f(report_path);
        if (!f) throw ParseError("cannot write " + report_path);
        f << json.dump(2) << "\n";
    }
    out << json["verdict"].get<std::string>() << ": protocol=" << info.name << " grid=" << grid_text(g)
        << " k=" << c.k << " model=" << to_string(opt.model) << " initials=" << report.verdicts.size()
        << " states=" << report.stats.states << " edges=" << report.stats.edges
        << " decisions=" << report.stats.decisions << " time=" << report.stats.wall_seconds << "s\n";
    if (!report.conclusive) return kInconclusive;
    if (report.passed) return kOk;
    const auto& cx = *report.counterexample;
    std::string path = trace_path;
    if (path.empty()) path = "counterexample-" + info.name + "-" + grid_text(g) + "-" + to_string(opt.model) + ".ndjson";
    std::ofstream f(path);
    if (!f) throw ParseError("cannot write " + path);
    write_trace(f, cx.trace);
    out << "counterexample (" << to_string(cx.kind) << ") from \"" << format_configuration(cx.trace.header.initial)
        << "\": " << cx.trace.events.size() << " events";
    if (cx.kind == Counterexample::Kind::FairLasso) out << ", loop starts after event " << cx.lasso_start;
    out << "\ntrace: " << path << "\n";
    return kFailed;
}

int write_certificate(const Json& cert, const std::string& path, std::ostream& out) {
    if (!path.empty()) {
        std::ofstream f(path);
        if (!f) throw ParseError("cannot write " + path);
        f << cert.dump(2) << "\n";
    }
    out << cert.dump(2) << "\n";
    return kOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exploration of grids by oblivious robots"};
    app.require_subcommand(1);

    Common run_c;
    std::string initial, adversary = "random", trace_path;
    std::uint64_t seed = 0;
    int max_steps = 100000;
    auto* run_cmd = app.add_subcommand("run", "simulate one execution");
    add_common(run_cmd, run_c);
    run_cmd->add_option("--initial", initial, "initial configuration, e.g. \"0,0;1,0;2,1\"");
    run_cmd->add_option("--adversary", adversary, "random | sequential | synchronous | script:FILE");
    run_cmd->add_option("--seed", seed, "seed for the random adversary and the initial sample");
    run_cmd->add_option("--max-steps", max_steps, "step limit");
    run_cmd->add_option("--trace", trace_path, "write the trace (NDJSON) here");

    Common ver_c;
    std::size_t budget = VerifyOptions{}.budget;
    int jobs = 1;
    bool no_canon = false;
    std::string report_path, cx_path;
    auto* ver_cmd = app.add_subcommand("verify", "exhaustive verification over all initials and schedules");
    add_common(ver_cmd, ver_c);
    ver_cmd->add_option("--budget", budget, "canonical state budget per worker");
    ver_cmd->add_option("--jobs", jobs, "worker threads");
    ver_cmd->add_option("--report", report_path, "write the JSON report here");
    ver_cmd->add_option("--trace", cx_path, "where to write a counterexample trace");
    ver_cmd->add_flag("--no-canonicalize", no_canon, "do not quotient states by grid symmetries");

    auto* oracle_cmd = app.add_subcommand("oracle", "lower-bound and impossibility oracles");
    oracle_cmd->require_subcommand(1);
    std::string cert_path;
    auto* tw = oracle_cmd->add_subcommand("tower-walk", "longest class-simple walk beside a 2-tower on (3,3)");
    tw->add_option("--out", cert_path, "write the certificate here");
    int ft_k = 2;
    auto* ft = oracle_cmd->add_subcommand("full-tower", "moves of a k-tower on (3,3)");
    ft->add_option("--k", ft_k, "tower size")->required();
    ft->add_option("--out", cert_path, "write the certificate here");
    std::string imp_grid;
    int imp_k = 0;
    std::size_t cap = 24;
    auto* imp = oracle_cmd->add_subcommand("impossibility", "enumerate every protocol of a tiny instance");
    imp->add_option("--grid", imp_grid, "grid as IxJ")->required();
    imp->add_option("--k", imp_k, "number of robots")->required();
    imp->add_option("--cap", cap, "maximum number of view classes");
    imp->add_option("--out", cert_path, "write the certificate here");

    int port = 8080;
    std::string static_dir, host = "127.0.0.1";
    auto* serve_cmd = app.add_subcommand("serve", "HTTP session service for the adversary console");
    serve_cmd->add_option("--port", port, "TCP port")->required();
    serve_cmd->add_option("--static", static_dir, "directory served at /");
    serve_cmd->add_option("--host", host, "bind address");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsage;
    }
    try {
        if (*run_cmd) return do_run(run_c, initial, adversary, seed, max_steps, trace_path, out);
        if (*ver_cmd) return do_verify(ver_c, budget, jobs, report_path, cx_path, no_canon, out);
        if (*tw) return write_certificate(tower_walk_certificate(), cert_path, out);
        if (*ft) return write_certificate(to_json(full_tower_analysis(ft_k)), cert_path, out);
        if (*imp) {
            auto r = search_protocol_space(parse_grid(imp_grid), imp_k, SearchOptions{cap});
            if (!r.within_cap) {
                err << "refused: " << r.refusal << "\n";
                return kInconclusive;
            }
            return write_certificate(to_json(r), cert_path, out);
        }
        if (*serve_cmd) return serve(host, port, static_dir, out);
    } catch (const UnsupportedInstance& e) {
        err << "unsupported: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        err << "malformed input: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

}  // namespace gridexp
