#include "bilindblad/kernels.hpp"

#include <atomic>
#include <cstring>

namespace bilindblad::la::kernels {

namespace {
std::atomic<Mode> g_mode{Mode::Parallel};
}

Mode mode() { return g_mode.load(std::memory_order_relaxed); }
void set_mode(Mode m) { g_mode.store(m, std::memory_order_relaxed); }

void matmul_serial(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  std::memset(out, 0, n * n * sizeof(cplx));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const cplx aik = a[i * n + k];
      if (aik == cplx{}) continue;
      const cplx* brow = b + k * n;
      cplx* orow = out + i * n;
      for (std::size_t j = 0; j < n; ++j) orow[j] += aik * brow[j];
    }
  }
}

void matmul_parallel(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    cplx* orow = out + i * n;
    for (std::size_t j = 0; j < n; ++j) orow[j] = cplx{};
    for (std::size_t k = 0; k < n; ++k) {
      const cplx aik = a[i * n + k];
      if (aik == cplx{}) continue;
      const cplx* brow = b + k * n;
      for (std::size_t j = 0; j < n; ++j) orow[j] += aik * brow[j];
    }
  }
}

void matmul(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  if (mode() == Mode::Parallel && n >= 48)
    matmul_parallel(a, b, out, n);
  else
    matmul_serial(a, b, out, n);
}

void axpby_serial(cplx alpha, const cplx* a, cplx beta, const cplx* b,
                  cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = alpha * a[i] + beta * b[i];
}

void axpby_parallel(cplx alpha, const cplx* a, cplx beta, const cplx* b,
                    cplx* out, std::size_t n) {
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) out[i] = alpha * a[i] + beta * b[i];
}

void axpby(cplx alpha, const cplx* a, cplx beta, const cplx* b, cplx* out,
           std::size_t n) {
  if (mode() == Mode::Parallel && n >= 4096)
    axpby_parallel(alpha, a, beta, b, out, n);
  else
    axpby_serial(alpha, a, beta, b, out, n);
}

void kron_serial(const cplx* a, std::size_t na, const cplx* b, std::size_t nb,
                 cplx* out) {
  const std::size_t n = na * nb;
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t k = 0; k < nb; ++k)
      for (std::size_t j = 0; j < na; ++j) {
        const cplx aij = a[i * na + j];
        cplx* dst = out + (i * nb + k) * n + j * nb;
        const cplx* src = b + k * nb;
        for (std::size_t l = 0; l < nb; ++l) dst[l] = aij * src[l];
      }
}

void kron_parallel(const cplx* a, std::size_t na, const cplx* b,
                   std::size_t nb, cplx* out) {
  const std::size_t n = na * nb;
#pragma omp parallel for collapse(2) schedule(static)
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t k = 0; k < nb; ++k)
      for (std::size_t j = 0; j < na; ++j) {
        const cplx aij = a[i * na + j];
        cplx* dst = out + (i * nb + k) * n + j * nb;
        const cplx* src = b + k * nb;
        for (std::size_t l = 0; l < nb; ++l) dst[l] = aij * src[l];
      }
}

void kron(const cplx* a, std::size_t na, const cplx* b, std::size_t nb,
          cplx* out) {
  if (mode() == Mode::Parallel && na * nb >= 64)
    kron_parallel(a, na, b, nb, out);
  else
    kron_serial(a, na, b, nb, out);
}

}  // namespace bilindblad::la::kernels
