// Serial reference vs OpenMP kernels. Prints the median wall time of each
// kernel at a few problem sizes, the speedup, and whether the outputs match
// bit for bit.
//
//   bench_kernels [threads] [repeats]

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <vector>

#include "skm/kernels.hpp"
#include "skm/random.hpp"

namespace k = skm::kernels;

namespace {

double median_ms(int repeats, const std::function<void()>& fn) {
  std::vector<double> ms;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    ms.push_back(std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - t0)
                     .count());
  }
  std::nth_element(ms.begin(), ms.begin() + ms.size() / 2, ms.end());
  return ms[ms.size() / 2];
}

void report(const char* kernel, std::size_t m, std::size_t n, double serial,
            double parallel, bool same) {
  std::printf("%-15s %6zu x %-4zu  serial %9.3f ms  parallel %9.3f ms  "
              "speedup %5.2f  %s\n",
              kernel, m, n, serial, parallel, serial / parallel,
              same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int threads = argc > 1 ? std::atoi(argv[1]) : omp_get_num_procs();
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 9;
  omp_set_num_threads(std::max(1, threads));
  std::printf("threads %d, repeats %d\n", omp_get_max_threads(), repeats);

  skm::Rng rng(1);
  const std::size_t shapes[][2] = {{1000, 50}, {5000, 100}, {20000, 200}};
  for (const auto& shape : shapes) {
    const std::size_t m = shape[0], n = shape[1];
    std::vector<double> a(m * n), b(m), x(n);
    rng.fill_normal(a);
    rng.fill_normal(b);
    rng.fill_normal(x);
    const k::MatrixView av{a.data(), m, n};

    std::vector<double> y1(m), y2(m);
    const double ms_s = median_ms(repeats, [&] { k::serial::matvec(av, x, y1); });
    const double ms_p = median_ms(repeats, [&] { k::parallel::matvec(av, x, y2); });
    report("matvec", m, n, ms_s, ms_p, y1 == y2);

    k::ArgMax r1, r2;
    const double mr_s =
        median_ms(repeats, [&] { r1 = k::serial::max_residual(av, b, x); });
    const double mr_p =
        median_ms(repeats, [&] { r2 = k::parallel::max_residual(av, b, x); });
    report("max_residual", m, n, mr_s, mr_p,
           r1.index == r2.index && r1.value == r2.value);

    // Dense Gaussian sketch with 25 columns, as used by GSM.
    const std::size_t c = 25;
    std::vector<double> s(m * c);
    rng.fill_normal(s);
    const k::MatrixView sv{s.data(), m, c};
    std::vector<double> o1(c * n), o2(c * n), h1(c), h2(c);
    const double sp_s =
        median_ms(repeats, [&] { k::serial::sketch_product(sv, av, b, o1, h1); });
    const double sp_p =
        median_ms(repeats, [&] { k::parallel::sketch_product(sv, av, b, o2, h2); });
    report("sketch_product", m, n, sp_s, sp_p, o1 == o2 && h1 == h2);
  }
  return 0;
}
