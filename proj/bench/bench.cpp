// Timing comparison of the OpenMP kernels against their serial reference
// paths. Both paths produce identical results (the test suite pins that);
// this binary only reports wall-clock times and the observed speedup.
//
// Two kernels are parallel: the spectral word scan (tree split by first
// letter) and the trajectory batch (one thread per initial condition).

#include "nonosc/compound.hpp"
#include "nonosc/lyapunov.hpp"
#include "nonosc/network.hpp"
#include "nonosc/simulate.hpp"
#include "nonosc/stoich.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

using namespace nonosc;

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Median of repeated runs keeps one-off scheduler noise out of the report.
template <typename F>
double timed(int reps, F&& body) {
    std::vector<double> times;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        body();
        times.push_back(seconds_since(t0));
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-28s serial %8.3f s   parallel %8.3f s   speedup %.2fx\n", name,
                serial, parallel, serial / parallel);
}

}  // namespace

int main() {
    const Network net =
        parse_network_file(std::string(NONOSC_DATA_DIR) + "/ptm_open.crn");
    const ReducedSystem rs =
        build_reduction(net, std::vector<std::string>{"L", "K", "P"});

    std::printf("threads available: %d\n\n", omp_get_max_threads());

    // Word scan over the second-compound projections: no witness exists for
    // this family, so every length level is exhausted and the whole tree of
    // 8 + 8^2 + ... + 8^7 words is visited.
    std::vector<RatMatrix> proj2;
    for (const auto& f : rs.factors)
        proj2.push_back(rank_one_compound_projection(f.v, f.w));
    const auto scan = [&](bool parallel) {
        const auto w = spectral_word_scan(proj2, 7, 10'000'000, parallel);
        if (w) std::printf("unexpected witness: %s\n", w->describe().c_str());
    };
    const double scan_serial = timed(3, [&] { scan(false); });
    const double scan_parallel = timed(3, [&] { scan(true); });
    report("spectral word scan (len 7)", scan_serial, scan_parallel);

    // Trajectory batch with the variational cascade riding along.
    const MassActionParams params{{5.0, 3.0, 5.0, 1.0, 2.0, 6.0}, {15.0, 15.0, 15.0}};
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> ud(0.5, 3.5);
    std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> starts;
    for (int i = 0; i < 16; ++i) {
        Eigen::VectorXd xd(3), d0(3);
        for (int j = 0; j < 3; ++j) {
            xd(j) = ud(gen);
            d0(j) = ud(gen) - 2.0;
        }
        starts.emplace_back(xd, d0);
    }
    const auto batch = [&](bool parallel) {
        const auto trs = integrate_batch(rs, params, starts, 20.0, 1e-3, nullptr, parallel);
        if (trs.size() != starts.size()) std::printf("batch size mismatch\n");
    };
    const double batch_serial = timed(3, [&] { batch(false); });
    const double batch_parallel = timed(3, [&] { batch(true); });
    report("trajectory batch (16 runs)", batch_serial, batch_parallel);

    return 0;
}
