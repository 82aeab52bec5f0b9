// Timing harness comparing the serial reference kernels against the OpenMP
// ones on the dense complex workloads (matmul, Kronecker, matrix
// exponential).
//
// Usage: bench_kernels [sizes...]   (defaults: 64 128 256 512)

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include <omp.h>

#include "bilindblad/cmatrix.hpp"

using namespace bilindblad::la;
using h_clock = std::chrono::high_resolution_clock;

namespace {

double seconds_since(h_clock::time_point t0) {
  return std::chrono::duration<double>(h_clock::now() - t0).count();
}

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = h_clock::now();
    f();
    best = std::min(best, seconds_since(t0));
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::size_t> sizes = {64, 128, 256, 512};
  if (argc > 1) {
    sizes.clear();
    for (int i = 1; i < argc; ++i)
      sizes.push_back(static_cast<std::size_t>(std::atol(argv[i])));
  }

  std::printf("threads=%d\n", omp_get_max_threads());
  std::printf("%-10s %8s %12s %12s %9s %12s\n", "kernel", "n", "serial[s]",
              "parallel[s]", "speedup", "max|diff|");

  std::mt19937_64 rng(1234);
  for (std::size_t n : sizes) {
    CMatrix a = random_matrix(rng, n), b = random_matrix(rng, n);
    CMatrix out_s(n), out_p(n);

    double ts = time_best_of(3, [&] {
      kernels::matmul_serial(a.data(), b.data(), out_s.data(), n);
    });
    double tp = time_best_of(3, [&] {
      kernels::matmul_parallel(a.data(), b.data(), out_p.data(), n);
    });
    std::printf("%-10s %8zu %12.6f %12.6f %8.2fx %12.3e\n", "matmul", n, ts,
                tp, ts / tp, (out_s - out_p).max_abs());
  }

  for (std::size_t n : sizes) {
    if (n > 256) continue;  // kron output is n^2 x n^2 against a 2x2 block
    CMatrix a = random_matrix(rng, n), s2 = random_matrix(rng, 2);
    CMatrix out_s(2 * n), out_p(2 * n);
    double ts = time_best_of(3, [&] {
      kernels::kron_serial(a.data(), n, s2.data(), 2, out_s.data());
    });
    double tp = time_best_of(3, [&] {
      kernels::kron_parallel(a.data(), n, s2.data(), 2, out_p.data());
    });
    std::printf("%-10s %8zu %12.6f %12.6f %8.2fx %12.3e\n", "kron", n, ts, tp,
                ts / tp, (out_s - out_p).max_abs());
  }

  for (std::size_t n : sizes) {
    if (n > 256) continue;
    CMatrix a = 0.5 * random_matrix(rng, n);
    CMatrix es, ep;
    kernels::set_mode(kernels::Mode::Serial);
    double ts = time_best_of(2, [&] { es = matrix_exponential(a); });
    kernels::set_mode(kernels::Mode::Parallel);
    double tp = time_best_of(2, [&] { ep = matrix_exponential(a); });
    std::printf("%-10s %8zu %12.6f %12.6f %8.2fx %12.3e\n", "matexp", n, ts,
                tp, ts / tp, (es - ep).max_abs());
  }
  return 0;
}
