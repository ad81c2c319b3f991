// Benchmark: the OpenMP multistart kernel against its serial reference.
// Also asserts the two produce identical result lists.

#include <chrono>
#include <cstdio>

#include "crn/dsl.hpp"
#include "crn/equilibria.hpp"
#include "crn/fixtures.hpp"

using namespace crn;

namespace {

double time_once(const std::function<std::vector<EquilibriumPoint>()>& f,
                 std::vector<EquilibriumPoint>& out) {
    auto t0 = std::chrono::steady_clock::now();
    out = f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    int starts = argc > 1 ? std::atoi(argv[1]) : 4096;
    KineticModel model = KineticModel::make(
        fixtures::mapk_a_network(),
        vecd({1.0, 1.0, 1.0, 1.0, 3.0, 1.0}));
    Eigen::VectorXd anchor(5);
    anchor << 1.0, 300.0, 99.0, 99.0, 101.0;

    MultistartOptions opts;
    opts.n_starts = starts;
    opts.seed = 1;

    std::vector<EquilibriumPoint> serial, parallel;
    double ts = time_once([&] { return multistart_search_serial(model, anchor, opts); }, serial);
    double tp = time_once([&] { return multistart_search(model, anchor, opts); }, parallel);

    if (serial.size() != parallel.size()) {
        std::fprintf(stderr, "MISMATCH: serial %zu vs parallel %zu results\n", serial.size(),
                     parallel.size());
        return 1;
    }
    for (size_t i = 0; i < serial.size(); ++i)
        if (serial[i].x != parallel[i].x) {
            std::fprintf(stderr, "MISMATCH at result %zu\n", i);
            return 1;
        }

    std::printf("multistart on the 5-species cascade, %d starts, %zu equilibria\n", starts,
                serial.size());
    std::printf("  serial   %.3fs\n", ts);
    std::printf("  parallel %.3fs  (speedup %.2fx)\n", tp, ts / tp);
    return 0;
}
