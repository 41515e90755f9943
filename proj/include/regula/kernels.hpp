#pragma once
// Dense double-precision kernels used by the measure, empirics and decision
// code. Each kernel has a scalar reference and, where the target supports
// it, an AVX2 (x86-64) or NEON (aarch64) variant. The variant is chosen once
// at runtime from CPU capabilities and may be overridden for testing.

#include <cstddef>
#include <span>
#include <string_view>

namespace regula::kernels {

enum class Level { Scalar, Avx2, Neon };

std::string_view level_name(Level level);

/// Best level supported by the running CPU.
Level detect_level();

/// Level currently used by the dispatching entry points below.
Level active_level();

/// Returns false (and leaves the active level unchanged) when `level` is
/// not supported on this CPU or was not compiled in.
bool set_level(Level level);

bool level_supported(Level level);

// Dispatching entry points. Spans of unequal length are a programming
// error; the shorter length is not silently used.

double dot(std::span<const double> a, std::span<const double> b);
double l1_distance(std::span<const double> a, std::span<const double> b);
double linf_distance(std::span<const double> a, std::span<const double> b);

/// y[i] += alpha * x[i]. Elementwise, so every level produces bit-identical
/// results (no fused multiply-add is used).
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// acc[i] = max(acc[i], x[i]).
void max_accumulate(std::span<const double> x, std::span<double> acc);

/// out[r] = dot(row r of `matrix`, x) for a row-major rows x x.size() matrix.
void gemv(std::span<const double> matrix, std::span<const double> x, std::span<double> out);

// Variant tables; exposed so equivalence tests can call every compiled
// variant directly.
struct Table {
    double (*dot)(const double*, const double*, std::size_t);
    double (*l1_distance)(const double*, const double*, std::size_t);
    double (*linf_distance)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*max_accumulate)(const double*, double*, std::size_t);
};

const Table& scalar_table();
/// nullptr when the variant is not compiled for this target.
const Table* avx2_table();
const Table* neon_table();

}  // namespace regula::kernels
