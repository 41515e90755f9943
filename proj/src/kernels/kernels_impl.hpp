#pragma once
// Raw-pointer kernel variants. Kept free of standard library templates so
// the AVX2 translation unit (built with -mavx2) emits no inline functions
// that could be merged into baseline code.

#include <cstddef>

namespace regula::kernels::scalar {
double dot(const double* a, const double* b, std::size_t n);
double l1_distance(const double* a, const double* b, std::size_t n);
double linf_distance(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void max_accumulate(const double* x, double* acc, std::size_t n);
}  // namespace regula::kernels::scalar

#if defined(REGULA_HAVE_AVX2)
namespace regula::kernels::avx2 {
double dot(const double* a, const double* b, std::size_t n);
double l1_distance(const double* a, const double* b, std::size_t n);
double linf_distance(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void max_accumulate(const double* x, double* acc, std::size_t n);
}  // namespace regula::kernels::avx2
#endif

#if defined(REGULA_HAVE_NEON)
namespace regula::kernels::neon {
double dot(const double* a, const double* b, std::size_t n);
double l1_distance(const double* a, const double* b, std::size_t n);
double linf_distance(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void max_accumulate(const double* x, double* acc, std::size_t n);
}  // namespace regula::kernels::neon
#endif
