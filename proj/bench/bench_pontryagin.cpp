// Parallel kernels against their serial references.
//   bench_pontryagin [--quick]

#include "zcycles/cycle.hpp"
#include "zcycles/linalg.hpp"
#include "zcycles/tangent.hpp"

#include <omp.h>

#include <chrono>
#include <cstring>
#include <iomanip>
#include <iostream>
#include <random>

using namespace zcycles;

namespace {

template <class F>
double seconds(F&& f, int reps)
{
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r)
        f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

Cycle random_cycle(std::size_t rank, std::size_t terms, int span, std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> coord(0, span);
    std::uniform_int_distribution<int> coeff(-9, 9);
    Cycle c(rank);
    for (std::size_t t = 0; t < terms; ++t) {
        std::vector<Integer> p;
        for (std::size_t i = 0; i < rank; ++i)
            p.emplace_back(coord(rng));
        Rational q(coeff(rng), 7);
        q.canonicalize();
        c.accumulate(GroupPoint(std::move(p)), q);
    }
    return c;
}

linalg::Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> entry(-5, 5);
    linalg::Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            m(r, c) = entry(rng);
    return m;
}

void row(const std::string& name, double serial, double parallel)
{
    std::cout << std::left << std::setw(34) << name << std::right << std::setw(12) << std::fixed
              << std::setprecision(5) << serial << std::setw(12) << parallel << std::setw(9) << std::setprecision(2)
              << serial / parallel << '\n';
}

}  // namespace

int main(int argc, char** argv)
{
    const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
    const int reps = quick ? 1 : 3;
    std::mt19937_64 rng(42);

    std::cout << "threads: " << omp_get_max_threads() << '\n';
    std::cout << std::left << std::setw(34) << "kernel" << std::right << std::setw(12) << "serial[s]" << std::setw(12)
              << "parallel[s]" << std::setw(9) << "speedup" << '\n';

    for (std::size_t terms : quick ? std::vector<std::size_t>{64} : std::vector<std::size_t>{64, 256, 1024}) {
        const Cycle a = random_cycle(3, terms, 12, rng);
        const Cycle b = random_cycle(3, terms, 12, rng);
        RingContext ctx(3, 1, 1000);
        Cycle s, p;
        const double ts = seconds([&] { s = pontryagin_serial(a, b, ctx); }, reps);
        const double tp = seconds([&] { p = pontryagin(a, b, ctx); }, reps);
        if (s != p) {
            std::cerr << "pontryagin mismatch at " << terms << " terms\n";
            return 1;
        }
        row("pontryagin " + std::to_string(terms) + "x" + std::to_string(terms), ts, tp);
    }

    for (std::size_t n : quick ? std::vector<std::size_t>{40} : std::vector<std::size_t>{40, 80, 120}) {
        const auto m = random_matrix(n, n, rng);
        std::size_t rs = 0, rp = 0;
        const double ts = seconds([&] { rs = linalg::rank_serial(m); }, reps);
        const double tp = seconds([&] { rp = linalg::rank(m); }, reps);
        if (rs != rp || rs != linalg::reference::rank(m)) {
            std::cerr << "rank mismatch at n = " << n << '\n';
            return 1;
        }
        row("bareiss rank " + std::to_string(n) + "x" + std::to_string(n), ts, tp);
    }

    const std::uint64_t budget = quick ? 2000 : 20000;
    const unsigned workers = static_cast<unsigned>(std::max(1, omp_get_max_threads()));
    SearchResult r1, rw;
    const double t1 = seconds([&] { r1 = search_max_total_dimension(4, 2, budget, 0, 1); }, 1);
    const double tw = seconds([&] { rw = search_max_total_dimension(4, 2, budget, 0, workers); }, 1);
    if (r1.best_sum != rw.best_sum || r1.best_candidate != rw.best_candidate) {
        std::cerr << "search result depends on the worker count\n";
        return 1;
    }
    row("search k=4 n=2 budget " + std::to_string(budget), t1, tw);
    return 0;
}
