#pragma once

#include <complex>
#include <cstddef>

namespace bilindblad::la::kernels {

using cplx = std::complex<double>;

enum class Mode { Serial, Parallel };

/// Process-wide kernel dispatch. Parallel kernels assign each output row to
/// one thread with a fixed-order inner loop, so results are bitwise
/// independent of the thread count.
Mode mode();
void set_mode(Mode m);

// out = a * b, square n x n, row-major. out must not alias a or b.
void matmul_serial(const cplx* a, const cplx* b, cplx* out, std::size_t n);
void matmul_parallel(const cplx* a, const cplx* b, cplx* out, std::size_t n);
void matmul(const cplx* a, const cplx* b, cplx* out, std::size_t n);

// out = alpha*a + beta*b, elementwise over n values.
void axpby_serial(cplx alpha, const cplx* a, cplx beta, const cplx* b,
                  cplx* out, std::size_t n);
void axpby_parallel(cplx alpha, const cplx* a, cplx beta, const cplx* b,
                    cplx* out, std::size_t n);
void axpby(cplx alpha, const cplx* a, cplx beta, const cplx* b, cplx* out,
           std::size_t n);

// Kronecker product of square matrices: out is (na*nb) x (na*nb).
void kron_serial(const cplx* a, std::size_t na, const cplx* b, std::size_t nb,
                 cplx* out);
void kron_parallel(const cplx* a, std::size_t na, const cplx* b, std::size_t nb,
                   cplx* out);
void kron(const cplx* a, std::size_t na, const cplx* b, std::size_t nb,
          cplx* out);

}  // namespace bilindblad::la::kernels
