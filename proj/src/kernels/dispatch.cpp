#include "regula/kernels.hpp"

#include <atomic>
#include <stdexcept>

#include "kernels_impl.hpp"

namespace regula::kernels {

namespace {

constexpr Table kScalar{scalar::dot, scalar::l1_distance, scalar::linf_distance, scalar::axpy,
                        scalar::max_accumulate};
#if defined(REGULA_HAVE_AVX2)
constexpr Table kAvx2{avx2::dot, avx2::l1_distance, avx2::linf_distance, avx2::axpy,
                      avx2::max_accumulate};
#endif
#if defined(REGULA_HAVE_NEON)
constexpr Table kNeon{neon::dot, neon::l1_distance, neon::linf_distance, neon::axpy,
                      neon::max_accumulate};
#endif

bool cpu_has_avx2() {
#if defined(REGULA_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const Table* table_for(Level level) {
    switch (level) {
        case Level::Scalar: return &kScalar;
        case Level::Avx2: return cpu_has_avx2() ? avx2_table() : nullptr;
        case Level::Neon: return neon_table();
    }
    return nullptr;
}

struct Active {
    std::atomic<const Table*> table;
    std::atomic<Level> level;
    Active() {
        const Level best = detect_level();
        table.store(table_for(best));
        level.store(best);
    }
};

Active& active() {
    static Active a;
    return a;
}

const Table& current() { return *active().table.load(std::memory_order_relaxed); }

void check_same(std::size_t a, std::size_t b) {
    if (a != b) throw std::invalid_argument("kernel operands differ in length");
}

}  // namespace

std::string_view level_name(Level level) {
    switch (level) {
        case Level::Scalar: return "scalar";
        case Level::Avx2: return "avx2";
        case Level::Neon: return "neon";
    }
    return "unknown";
}

const Table& scalar_table() { return kScalar; }

const Table* avx2_table() {
#if defined(REGULA_HAVE_AVX2)
    return &kAvx2;
#else
    return nullptr;
#endif
}

const Table* neon_table() {
#if defined(REGULA_HAVE_NEON)
    return &kNeon;
#else
    return nullptr;
#endif
}

Level detect_level() {
    if (neon_table() != nullptr) return Level::Neon;
    if (cpu_has_avx2()) return Level::Avx2;
    return Level::Scalar;
}

bool level_supported(Level level) { return table_for(level) != nullptr; }

Level active_level() { return active().level.load(); }

bool set_level(Level level) {
    const Table* t = table_for(level);
    if (t == nullptr) return false;
    active().table.store(t);
    active().level.store(level);
    return true;
}

double dot(std::span<const double> a, std::span<const double> b) {
    check_same(a.size(), b.size());
    return current().dot(a.data(), b.data(), a.size());
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
    check_same(a.size(), b.size());
    return current().l1_distance(a.data(), b.data(), a.size());
}

double linf_distance(std::span<const double> a, std::span<const double> b) {
    check_same(a.size(), b.size());
    return current().linf_distance(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    check_same(x.size(), y.size());
    current().axpy(alpha, x.data(), y.data(), x.size());
}

void max_accumulate(std::span<const double> x, std::span<double> acc) {
    check_same(x.size(), acc.size());
    current().max_accumulate(x.data(), acc.data(), x.size());
}

void gemv(std::span<const double> matrix, std::span<const double> x, std::span<double> out) {
    const std::size_t cols = x.size();
    if (matrix.size() != cols * out.size())
        throw std::invalid_argument("gemv: matrix shape does not match operands");
    const Table& t = current();
    for (std::size_t r = 0; r < out.size(); ++r) out[r] = t.dot(matrix.data() + r * cols, x.data(), cols);
}

}  // namespace regula::kernels
