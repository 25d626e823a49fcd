#include "toric/cli.hpp"
#include "toric/embedding.hpp"
#include "toric/equilibria.hpp"
#include "toric/experiments.hpp"
#include "toric/json_io.hpp"
#include "toric/surface.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace toric {

namespace {

struct Options {
    std::string network;
    std::string certificate;
    double epsilon = 0.5;
    double horizon = 50.0;
    long trials = 1000;
    std::uint64_t seed = 7;
    double tol = 0.0;
    std::string out;
    std::string format = "json";
    std::string x0;
    double sample_dt = 0.0;
    double scale = 1.0;
    bool faithful = false;
    int per_segment = 10;
};

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

Vector parse_point(const std::string& s, int dim)
{
    Vector x = Vector::Ones(dim);
    if (s.empty()) {
        return x;
    }
    std::vector<double> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            v.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw UsageError("--x0: not a number: " + tok);
        }
    }
    if (static_cast<int>(v.size()) != dim) {
        throw UsageError("--x0 needs " + std::to_string(dim) + " comma-separated values");
    }
    return to_vector(v);
}

class Emitter {
public:
    Emitter(const Options& o, std::ostream& out) : opt_(o), out_(out)
    {
        if (!o.out.empty()) {
            std::filesystem::create_directories(o.out);
        }
    }

    void json(const std::string& kind, const Json& body)
    {
        write(kind + ".json", dump_report(kind, body));
    }

    void text(const std::string& name, const std::string& content) { write(name, content); }

private:
    void write(const std::string& name, const std::string& content)
    {
        if (opt_.out.empty()) {
            out_ << content;
            return;
        }
        std::ofstream f(std::filesystem::path(opt_.out) / name, std::ios::binary);
        if (!f) {
            throw Error(ErrorCode::InvalidArgument, "cannot write to " + opt_.out);
        }
        f << content;
    }

    const Options& opt_;
    std::ostream& out_;
};

ReactionNetwork load(const std::string& path)
{
    if (!std::filesystem::is_regular_file(path)) {
        throw UsageError("cannot open network file: " + path);
    }
    return load_network(path);
}

double tol_or(const Options& o, double def) { return o.tol > 0.0 ? o.tol : def; }

void require_json_format(const Options& o, const char* cmd)
{
    if (o.format != "json") {
        throw UsageError(std::string(cmd) + " only writes json");
    }
}

int cmd_analyze(const Options& o, Emitter& em)
{
    require_json_format(o, "analyze");
    auto net = load(o.network);
    em.json("analysis", analysis_json(net));
    return 0;
}

int cmd_equilibrium(const Options& o, Emitter& em)
{
    require_json_format(o, "equilibrium");
    auto net = load(o.network);
    auto r = solve_complex_balanced(net, net.rates(), tol_or(o, 1e-10));
    em.json("equilibrium", equilibrium_json(r));
    return r.x0 ? 0 : 1;
}

int cmd_simulate(const Options& o, Emitter& em)
{
    auto net = load(o.network);
    Vector x0 = parse_point(o.x0, net.dimension());
    IntegrateOptions io;
    io.sample_dt = o.sample_dt;
    if (o.tol > 0.0) {
        io.rtol = o.tol;
    }
    auto traj = integrate(net, x0, o.horizon, io);
    if (o.format == "csv") {
        std::ostringstream os;
        write_trajectory_csv(traj, os);
        em.text("trajectory.csv", os.str());
    } else {
        em.json("trajectory", trajectory_json(traj));
    }
    return 0;
}

int cmd_embed_verify(const Options& o, Emitter& em)
{
    require_json_format(o, "embed-verify");
    auto net = load(o.network);
    RateBand band(o.epsilon);
    auto cert = build_embedding(net, band);
    auto rep = sample_verify_embedding(cert, net, band, o.trials, LogBox{}, o.seed);
    Json body;
    body["certificate"] = certificate_json(cert);
    body["seed"] = o.seed;
    body["report"] = embedding_report_json(rep);
    em.json("embedding", body);
    return rep.all_passed() ? 0 : 1;
}

int cmd_curve2d(const Options& o, Emitter& em)
{
    require_json_format(o, "curve2d");
    auto net = load(o.network);
    if (net.dimension() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "curve2d needs a 2-species network");
    }
    RateBand band(o.epsilon);
    auto cert = build_embedding(net, band);
    auto curve = build_zero_separating_curve_2d(cert.arrangement, cert.delta0, o.scale);
    if (o.faithful) {
        curve = make_faithful_2d(curve, cert.arrangement, cert.delta0);
    }
    auto samples = curve_certificate(curve, o.per_segment);
    auto sep = verify_zero_separating(samples, cert.arrangement, cert.delta0, tol_or(o, 1e-9));
    auto cross = trajectory_crossing_test(curve, net, band, static_cast<int>(o.trials), o.horizon, o.seed);
    Json body;
    body["certificate"] = certificate_json(cert);
    body["curve"] = curve_json(curve);
    body["faithfulness_margin"] = o.faithful ? Json(faithfulness_margin(curve)) : Json(nullptr);
    body["surface"] = surface_certificate_json(samples);
    body["separation"] = separation_json(sep);
    body["crossing"] = crossing_json(cross);
    em.json("curve2d", body);
    if (!o.out.empty()) {
        em.text("curve2d.svg", curve_to_svg(curve, cert.arrangement, cert.delta0));
    }
    return sep.passed() && cross.never_crossed() ? 0 : 1;
}

int cmd_certify_surface(const Options& o, Emitter& em)
{
    require_json_format(o, "certify-surface");
    auto net = load(o.network);
    std::ifstream in(o.certificate);
    if (!in) {
        throw UsageError("cannot open certificate: " + o.certificate);
    }
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::exception& e) {
        throw UsageError(std::string("certificate is not valid JSON: ") + e.what());
    }
    // accept either a bare certificate or a curve2d report
    const Json& cj = j.contains("surface") ? j.at("surface") : j;
    auto surface = surface_certificate_from_json(cj);
    RateBand band(o.epsilon);
    auto cert = build_embedding(net, band);
    auto sep = verify_zero_separating(surface, cert.arrangement, cert.delta0, tol_or(o, 1e-9));
    Json body;
    body["certificate"] = certificate_json(cert);
    body["samples"] = surface.samples.size();
    body["separation"] = separation_json(sep);
    em.json("certify_surface", body);
    return sep.passed() ? 0 : 1;
}

ExperimentConfig experiment_config(const Options& o)
{
    ExperimentConfig cfg;
    cfg.network_path = o.network;
    cfg.epsilon = o.epsilon;
    cfg.horizon = o.horizon;
    cfg.samples = static_cast<int>(o.trials);
    cfg.seed = o.seed;
    cfg.output_dir = o.out;
    if (o.tol > 0.0) {
        cfg.position_tol = o.tol;
    }
    return cfg;
}

int cmd_experiment(const Options& o, Emitter& em, bool gac)
{
    auto net = load(o.network);
    auto cfg = experiment_config(o);
    auto rep = gac ? run_global_attractor_experiment(net, cfg) : run_persistence_experiment(net, cfg);
    const char* kind = gac ? "gac" : "persistence";
    if (o.format == "csv") {
        em.text(std::string(kind) + ".csv", convergence_csv(rep));
    } else {
        Json body = convergence_json(rep);
        body["seed"] = o.seed;
        body["horizon"] = o.horizon;
        em.json(kind, body);
    }
    return rep.passed() ? 0 : 1;
}

} // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Toric dynamical systems: embedding, equilibria, separating curves, experiments", "toric-gac"};
    app.require_subcommand(1, 1);
    Options o;

    auto common = [&](CLI::App* sub, bool net = true) {
        if (net) {
            sub->add_option("network", o.network, "reaction network file (.crn)")->required();
        }
        sub->add_option("--out", o.out, "write reports into this directory instead of stdout");
        sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--tol", o.tol, "tolerance override");
    };
    auto* analyze = app.add_subcommand("analyze", "structural analysis");
    common(analyze);
    auto* equilibrium = app.add_subcommand("equilibrium", "complex-balanced equilibrium");
    common(equilibrium);
    auto* simulate = app.add_subcommand("simulate", "integrate the mass-action system");
    common(simulate);
    simulate->add_option("--horizon", o.horizon)->check(CLI::PositiveNumber);
    simulate->add_option("--x0", o.x0, "initial state, comma separated");
    simulate->add_option("--sample-dt", o.sample_dt, "record on a uniform grid");
    auto* embed = app.add_subcommand("embed-verify", "sample the toric-inclusion embedding");
    common(embed);
    embed->add_option("--epsilon", o.epsilon)->check(CLI::Range(0.0, 1.0));
    embed->add_option("--trials", o.trials)->check(CLI::PositiveNumber);
    embed->add_option("--seed", o.seed);
    auto* curve = app.add_subcommand("curve2d", "zero-separating curve for a 2-species network");
    common(curve);
    curve->add_option("--epsilon", o.epsilon)->check(CLI::Range(0.0, 1.0));
    curve->add_option("--horizon", o.horizon)->check(CLI::PositiveNumber);
    curve->add_option("--trials", o.trials, "number of random rate schedules")->check(CLI::PositiveNumber);
    curve->add_option("--seed", o.seed);
    curve->add_option("--scale", o.scale)->check(CLI::PositiveNumber);
    curve->add_flag("--faithful", o.faithful);
    curve->add_option("--samples-per-segment", o.per_segment)->check(CLI::PositiveNumber);
    auto* certify = app.add_subcommand("certify-surface", "verify an external surface certificate");
    common(certify);
    certify->add_option("certificate", o.certificate, "JSON surface certificate")->required();
    certify->add_option("--epsilon", o.epsilon)->check(CLI::Range(0.0, 1.0));
    auto* persist = app.add_subcommand("persist", "persistence experiment");
    auto* gac = app.add_subcommand("gac", "global attractor experiment");
    for (auto* sub : {persist, gac}) {
        common(sub);
        sub->add_option("--horizon", o.horizon)->check(CLI::PositiveNumber);
        sub->add_option("--trials", o.trials, "number of initial conditions")->check(CLI::PositiveNumber);
        sub->add_option("--seed", o.seed);
        sub->add_option("--epsilon", o.epsilon)->check(CLI::Range(0.0, 1.0));
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }
    if (*curve && curve->count("--trials") == 0) {
        o.trials = 100;
    }
    for (auto* sub : {persist, gac}) {
        if (*sub && sub->count("--trials") == 0) {
            o.trials = 20;
        }
    }
    if (o.epsilon <= 0.0) {
        err << "error: --epsilon must lie in (0, 1]\n";
        return 2;
    }

    try {
        Emitter em(o, out);
        if (*analyze) return cmd_analyze(o, em);
        if (*equilibrium) return cmd_equilibrium(o, em);
        if (*simulate) return cmd_simulate(o, em);
        if (*embed) return cmd_embed_verify(o, em);
        if (*curve) return cmd_curve2d(o, em);
        if (*certify) return cmd_certify_surface(o, em);
        if (*persist) return cmd_experiment(o, em, false);
        if (*gac) return cmd_experiment(o, em, true);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

int cli_dispatch(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return cli_dispatch(args, std::cout, std::cerr);
}

} // namespace toric
