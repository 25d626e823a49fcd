// Serial vs OpenMP timings for the sampling kernels.
#include "toric/embedding.hpp"
#include "toric/equilibria.hpp"
#include "toric/experiments.hpp"
#include "toric/surface.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

using namespace toric;

namespace {

double time_ms(const std::function<void()>& f, int reps = 3)
{
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        f();
        auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void row(const char* name, double serial, double parallel, bool same)
{
    std::printf("%-28s %10.2f %10.2f %8.2fx  %s\n", name, serial, parallel, serial / parallel,
                same ? "match" : "MISMATCH");
}

} // namespace

int main()
{
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-28s %10s %10s %9s\n", "kernel", "serial ms", "omp ms", "speedup");

    auto net = parse_network("species A B C\n"
                             "A -> B ; k=1\nB -> C ; k=2\nC -> A ; k=1\n"
                             "A + B <-> 2 C ; kf=1 kr=3\n");
    RateBand band(0.1);
    auto cert = build_embedding(net, band);
    EmbeddingSampleReport s, p;
    double ts = time_ms([&] { s = sample_verify_embedding_serial(cert, net, band, 20000, LogBox{}, 7); });
    double tp = time_ms([&] { p = sample_verify_embedding(cert, net, band, 20000, LogBox{}, 7); });
    row("embedding (20000 trials)", ts, tp, s.passed == p.passed && s.failures.size() == p.failures.size());

    // the sweep and the experiment need a complex-balanced equilibrium
    auto cb = parse_network("species A B C D\n"
                            "A + B <-> C ; kf=1 kr=1\nC <-> 2 D ; kf=2 kr=1\n");
    auto eq = solve_complex_balanced(cb, cb.rates());
    LyapunovSweep ls, lp;
    ts = time_ms([&] { ls = lyapunov_sweep_serial(cb, cb.rates(), *eq.x0, 200000, 0.1, 10.0, 5); });
    tp = time_ms([&] { lp = lyapunov_sweep(cb, cb.rates(), *eq.x0, 200000, 0.1, 10.0, 5); });
    row("lyapunov sweep (200000)", ts, tp, ls.max_derivative == lp.max_derivative);

    ExperimentConfig cfg;
    cfg.samples = 64;
    ConvergenceReport gs, gp;
    ts = time_ms([&] { gs = run_global_attractor_experiment_serial(cb, cfg); }, 1);
    tp = time_ms([&] { gp = run_global_attractor_experiment(cb, cfg); }, 1);
    bool same = gs.outcomes.size() == gp.outcomes.size();
    for (std::size_t i = 0; same && i < gs.outcomes.size(); ++i) {
        same = gs.outcomes[i].final_state == gp.outcomes[i].final_state;
    }
    row("gac experiment (64 ics)", ts, tp, same);

    auto net2 = parse_network("species A B\nA -> B ; k=1\nB -> 0 ; k=1\n0 -> A ; k=1\n");
    RateBand band2(0.5);
    auto cert2 = build_embedding(net2, band2);
    auto curve = build_zero_separating_curve_2d(cert2.arrangement, cert2.delta0, 1.0);
    CrossingReport cs, cp;
    ts = time_ms([&] { cs = trajectory_crossing_test_serial(curve, net2, band2, 64, 50.0, 3); }, 1);
    tp = time_ms([&] { cp = trajectory_crossing_test(curve, net2, band2, 64, 50.0, 3); }, 1);
    row("crossing test (64 schedules)", ts, tp, cs.per_trajectory_min == cp.per_trajectory_min);
    return 0;
}
