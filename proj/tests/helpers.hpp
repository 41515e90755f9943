#pragma once

#include <string>
#include <vector>

#include "regula/measure.hpp"

namespace testing_support {

inline regula::Alphabet ab() { return regula::Alphabet({"a", "b"}); }
inline regula::Alphabet abc() { return regula::Alphabet({"a", "b", "c"}); }

inline regula::Measure m(const regula::Alphabet& x, std::vector<double> w) { return regula::make_measure(x, w); }

inline std::vector<double> vec(std::span<const double> s) { return {s.begin(), s.end()}; }

inline std::vector<std::vector<double>> points_of(const regula::PointCloud& c) {
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < c.size(); ++i) out.push_back(vec(c[i]));
    return out;
}

inline std::vector<std::vector<double>> points_of(const regula::Regularity& r) {
    std::vector<std::vector<double>> out;
    for (const auto& p : r.points()) out.push_back(vec(p.weights()));
    return out;
}

}  // namespace testing_support
