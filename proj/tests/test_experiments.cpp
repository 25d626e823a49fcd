#include <doctest.h>

#include "oracles.hpp"
#include "toric/equilibria.hpp"
#include "toric/experiments.hpp"
#include "toric/json_io.hpp"

#include <cmath>

using namespace toric;

namespace {

ReactionNetwork corpus(const char* name)
{
    return load_network(std::string(TORIC_CORPUS_DIR) + "/" + name);
}

} // namespace

TEST_CASE("config validation")
{
    ExperimentConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.horizon = 0.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = {};
    cfg.samples = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = {};
    cfg.box_lo = -1.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("seeded initial conditions")
{
    ExperimentConfig cfg;
    cfg.samples = 7;
    auto a = initial_conditions(cfg, 3);
    auto b = initial_conditions(cfg, 3);
    REQUIRE(a.size() == 7);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i] == b[i]);
        CHECK((a[i].array() >= 0.1).all());
        CHECK((a[i].array() <= 10.0).all());
    }
    cfg.initial_conditions = {Vector::Ones(2)};
    CHECK_THROWS_AS(initial_conditions(cfg, 3), Error);
}

TEST_CASE("persistence of the isomerization")
{
    ExperimentConfig cfg;
    cfg.samples = 10;
    auto rep = run_persistence_experiment(corpus("reversible_ab.crn"), cfg);
    REQUIRE(rep.outcomes.size() == 10);
    CHECK(rep.passed());
    for (const auto& o : rep.outcomes) {
        CHECK(o.persistence_min.minCoeff() >= 0.09);
        // the class meets the ray through x0 at c x0 / |x0|_1, which is (c/2, c/2) for unit rates
        double c = o.initial.sum();
        Vector ray = c * rep.equilibrium / rep.equilibrium.sum();
        CHECK((o.birch - ray).norm() <= 1e-12 * c);
        CHECK(std::abs(o.birch[0] - c / 2) < 1e-8);
        CHECK(std::abs(o.birch[1] - c / 2) < 1e-8);
    }
}

TEST_CASE("triangle trajectories settle at (1, 1)")
{
    ExperimentConfig cfg;
    auto rep = run_persistence_experiment(corpus("triangle.crn"), cfg);
    CHECK(rep.passed());
    for (const auto& o : rep.outcomes) {
        CHECK(std::abs(o.persistence_min[0] - 1.0) < 1e-3);
        CHECK(std::abs(o.persistence_min[1] - 1.0) < 1e-3);
    }
}

TEST_CASE("experiments require toric networks")
{
    ExperimentConfig cfg;
    try {
        run_global_attractor_experiment(parse_network("species A B\nA -> B ; k=1"), cfg);
        FAIL("expected NotWeaklyReversible");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotWeaklyReversible);
    }
    try {
        run_global_attractor_experiment(corpus("planar_cycle.crn"), cfg);
        FAIL("expected NoComplexBalance");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoComplexBalance);
    }
}

TEST_CASE("starting at the Birch point stays there")
{
    auto net = corpus("reversible_cycle.crn");
    auto eq = solve_complex_balanced(net, net.rates());
    REQUIRE(eq.x0);
    Vector start = 2.0 * *eq.x0;
    start[0] += 1.0;
    auto bp = birch_point(net, *eq.x0, start);
    auto traj = integrate(net, bp.point, 50.0);
    for (const auto& x : traj.states) {
        CHECK((x - bp.point).norm() <= 1e-8);
    }
}

TEST_CASE("detailed-balanced cycle converges to its balanced point")
{
    auto net = corpus("detailed_balanced.crn");
    ExperimentConfig cfg;
    cfg.samples = 8;
    auto rep = run_global_attractor_experiment(net, cfg);
    CHECK(rep.passed());
    for (const auto& o : rep.outcomes) {
        CHECK(is_detailed_balanced(net, net.rates(), o.final_state, 1e-6));
        CHECK(std::abs(o.final_state.sum() - o.initial.sum()) < 1e-9 * o.initial.sum());
    }
}

TEST_CASE("global attractor reports")
{
    auto net = corpus("reversible_ab.crn");
    ExperimentConfig cfg;
    auto par = run_global_attractor_experiment(net, cfg);
    auto ser = run_global_attractor_experiment_serial(net, cfg);
    REQUIRE(par.outcomes.size() == 20);
    CHECK(par.passed());
    for (std::size_t i = 0; i < par.outcomes.size(); ++i) {
        CHECK(par.outcomes[i].index == i);
        CHECK(par.outcomes[i].final_state == ser.outcomes[i].final_state);
    }
    // closed form x1(t) = c/2 + (x1(0) - c/2) e^{-2t}
    for (const auto& o : par.outcomes) {
        double c = o.initial.sum();
        double want = c / 2 + (o.initial[0] - c / 2) * std::exp(-2.0 * cfg.horizon);
        CHECK(std::abs(o.final_state[0] - want) <= 1e-8);
    }

    auto eq = solve_complex_balanced(net, net.rates());
    CHECK((par.equilibrium - *eq.x0).norm() <= 1e-10);
    CHECK(dump_report("gac", convergence_json(par)) ==
          dump_report("gac", convergence_json(run_global_attractor_experiment(net, cfg))));
}

TEST_CASE("Lyapunov sweeps never increase V")
{
    for (const auto& path : oracle::corpus_files(TORIC_CORPUS_DIR)) {
        auto net = load_network(path);
        auto eq = solve_complex_balanced(net, net.rates());
        if (!eq.x0) {
            continue;
        }
        CAPTURE(path);
        auto s = lyapunov_sweep(net, net.rates(), *eq.x0, 1000, 0.1, 10.0, 3);
        CHECK(s.points == 1000);
        CHECK(s.max_derivative <= 1e-12);
        auto serial = lyapunov_sweep_serial(net, net.rates(), *eq.x0, 1000, 0.1, 10.0, 3);
        CHECK(serial.max_derivative == s.max_derivative);
        CHECK(serial.argmax == s.argmax);
    }
    auto net = corpus("triangle.crn");
    CHECK_THROWS_AS(lyapunov_sweep(net, net.rates(), Vector::Ones(2), 0, 0.1, 10.0, 1), Error);
    CHECK_THROWS_AS(lyapunov_sweep(net, net.rates(), Vector::Ones(2), 5, 0.0, 10.0, 1), Error);
}
