// Serial vs OpenMP timings for the parallel kernels: the regime sweep, the
// batch solve, and quadrature sampling. Also checks that both paths agree.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include "tfstar/energy.hpp"
#include "tfstar/quadrature.hpp"
#include "tfstar/shoot.hpp"

using namespace tfstar;

namespace {

double best_of(int reps, const std::function<void()>& f) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

void report(const char* name, double serial, double parallel, bool same) {
    std::printf("%-22s serial %9.4f s   parallel %9.4f s   speedup %5.2fx   %s\n", name, serial, parallel,
                serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    int workers = worker_count();
    if (argc > 1) workers = std::atoi(argv[1]);
    set_worker_count(workers);
    std::printf("OpenMP workers: %d\n", worker_count());

    const ConstantSet c = ConstantSet::desk();
    bool all_same = true;

    {
        std::vector<double> betas;
        for (int i = 0; i < 64; ++i) betas.push_back(0.9084 + 0.0004 * i / 63.0);
        SweepResult s, p;
        const double ts = best_of(2, [&] { s = regime_sweep(1.0, betas, c, {}, Exec::Serial); });
        const double tp = best_of(2, [&] { p = regime_sweep(1.0, betas, c, {}, Exec::Parallel); });
        bool same = true;
        for (std::size_t i = 0; i < betas.size(); ++i) same = same && s.rows[i].counts.N_e == p.rows[i].counts.N_e;
        report("regime sweep (64)", ts, tp, same);
        all_same = all_same && same;
    }
    {
        std::vector<std::pair<double, double>> pts;
        for (int i = 0; i < 48; ++i) {
            const double a = 0.5 + 0.05 * i;
            pts.emplace_back(a, a * (0.90853 + 0.00006 * (i % 7) / 6.0));
        }
        std::vector<SweepRow> s, p;
        const double ts = best_of(2, [&] { s = solve_batch(pts, c, {}, Exec::Serial); });
        const double tp = best_of(2, [&] { p = solve_batch(pts, c, {}, Exec::Parallel); });
        bool same = true;
        for (std::size_t i = 0; i < pts.size(); ++i) same = same && s[i].counts.N_p == p[i].counts.N_p;
        report("batch solve (48)", ts, tp, same);
        all_same = all_same && same;
    }
    {
        const FullSolution sol = solve_profile(1.0, 0.9086, c);
        // refine the profile so the sampling dominates
        RadialProfile fine;
        for (int i = 0; i <= 20000; ++i) {
            const double r = sol.profile.outer_radius() * i / 20000.0;
            const ProfileSample s = sample(sol.profile, r);
            fine.push(r, s.u_e, s.u_p, s.du_e, s.du_p, 0.0, 0.0);
        }
        fine.d2u_e.clear();
        fine.d2u_p.clear();
        double vs = 0.0, vp = 0.0;
        const double ts = best_of(3, [&] { vs = evaluate_energy(fine, c, 1e-6, Exec::Serial).total; });
        const double tp = best_of(3, [&] { vp = evaluate_energy(fine, c, 1e-6, Exec::Parallel).total; });
        report("quadrature (20k nodes)", ts, tp, vs == vp);
        all_same = all_same && vs == vp;
    }
    return all_same ? 0 : 1;
}
