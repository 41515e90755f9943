#include "regula/decision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "regula/error.hpp"
#include "regula/kernels.hpp"

namespace regula {

LossMatrix::LossMatrix(std::vector<std::string> theta_labels, std::vector<std::string> decision_labels,
                       std::vector<double> values)
    : thetas_(std::move(theta_labels)), decisions_(std::move(decision_labels)), values_(std::move(values)) {
    if (decisions_.empty()) throw DataError("loss matrix needs at least one decision");
    {
        auto sorted = decisions_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw DataError("loss matrix has duplicate decision labels");
    }
    if (values_.size() != thetas_.size() * decisions_.size()) throw DataError("loss matrix: shape mismatch");
    for (double v : values_)
        if (!std::isfinite(v)) throw DataError("loss matrix entries must be finite");
}

std::span<const double> LossMatrix::row(std::size_t theta) const {
    if (theta >= theta_count()) throw DataError("loss matrix row out of range");
    return std::span<const double>(values_).subspan(theta * decision_count(), decision_count());
}

TestFunction LossMatrix::loss_of(std::size_t u) const {
    if (u >= decision_count()) throw DataError("loss matrix column out of range");
    std::vector<double> col(theta_count());
    for (std::size_t t = 0; t < theta_count(); ++t) col[t] = (*this)(t, u);
    return TestFunction::single_row(thetas_, std::move(col));
}

std::size_t LossMatrix::decision_index(const std::string& label) const {
    const auto it = std::find(decisions_.begin(), decisions_.end(), label);
    if (it == decisions_.end()) throw DataError("unknown decision label '" + label + "'");
    return static_cast<std::size_t>(it - decisions_.begin());
}

std::vector<std::size_t> argmin_set(const std::vector<double>& values, const std::vector<std::string>& labels) {
    if (values.empty()) return {};
    const double best = *std::min_element(values.begin(), values.end());
    const double tol = 1e-12 * std::max(1.0, std::fabs(best));
    std::vector<std::size_t> out;
    for (std::size_t u = 0; u < values.size(); ++u)
        if (values[u] - best <= tol) out.push_back(u);
    std::sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });
    return out;
}

namespace {

// sum_theta w(theta) L(theta, .) accumulated row by row; elementwise, so the
// result does not depend on the kernel level.
std::vector<double> weighted_columns(const LossMatrix& loss, std::span<const double> weights) {
    std::vector<double> out(loss.decision_count(), 0.0);
    for (std::size_t t = 0; t < loss.theta_count(); ++t)
        if (weights[t] != 0.0) kernels::axpy(weights[t], loss.row(t), out);
    return out;
}

void require_thetas(const LossMatrix& loss, const Alphabet& alphabet, const char* what) {
    if (!(loss.thetas() == alphabet))
        throw DataError(std::string(what) + ": labels do not match the loss matrix theta labels");
}

}  // namespace

CriterionReport minimax(const LossMatrix& loss) {
    std::vector<double> values(loss.row(0).begin(), loss.row(0).end());
    for (std::size_t t = 1; t < loss.theta_count(); ++t) kernels::max_accumulate(loss.row(t), values);
    auto argmin = argmin_set(values, loss.decisions());
    return CriterionReport{CriterionKind::Minimax, std::move(values), std::move(argmin), {}};
}

CriterionReport bayes(const LossMatrix& loss, const Measure& mu) {
    require_thetas(loss, mu.alphabet(), "bayes");
    auto values = weighted_columns(loss, mu.weights());
    auto argmin = argmin_set(values, loss.decisions());
    return CriterionReport{CriterionKind::Bayes, std::move(values), std::move(argmin), {}};
}

CriterionReport regularity_criterion(const LossMatrix& loss, const Regularity& regularity) {
    require_thetas(loss, regularity.alphabet(), "regularity_criterion");
    const std::size_t nu = loss.decision_count();
    std::vector<std::vector<double>> per_point;
    per_point.reserve(regularity.size());
    for (const auto& p : regularity.points()) per_point.push_back(weighted_columns(loss, p.weights()));

    std::vector<double> values(nu, -std::numeric_limits<double>::infinity());
    for (const auto& v : per_point) kernels::max_accumulate(v, values);

    std::vector<std::vector<std::size_t>> worst(nu);
    for (std::size_t u = 0; u < nu; ++u) {
        const double tol = 1e-12 * std::max(1.0, std::fabs(values[u]));
        for (std::size_t i = 0; i < per_point.size(); ++i)
            if (values[u] - per_point[i][u] <= tol) worst[u].push_back(i);
    }
    auto argmin = argmin_set(values, loss.decisions());
    return CriterionReport{CriterionKind::Regularity, std::move(values), std::move(argmin), std::move(worst)};
}

Proposition3Report verify_proposition3(const SamplingNet& net, const LossMatrix& loss, const std::string& decision,
                                       double r1, double r2, const Proposition3Params& params) {
    require_thetas(loss, net.alphabet(), "verify_proposition3");
    const std::size_t u = loss.decision_index(decision);
    if (params.windows < 1) throw PreconditionError("verify_proposition3: need at least one window");
    if (!(params.tail_fraction > 0.0 && params.tail_fraction <= 1.0))
        throw PreconditionError("verify_proposition3: tail fraction must lie in (0, 1]");

    Trajectory y = average_trajectory(net, loss.loss_of(u));
    const std::size_t n = y.size();
    const double wanted = std::ceil(params.tail_fraction * static_cast<double>(n) - 1e-9);
    const std::size_t tail = std::clamp(static_cast<std::size_t>(wanted), std::size_t{1}, n);
    if (tail < params.windows)
        throw PreconditionError("verify_proposition3: tail of " + std::to_string(tail) + " items is shorter than " +
                                std::to_string(params.windows) + " windows");
    const std::size_t begin = n - tail;

    std::vector<bool> exceeded(params.windows, false);
    bool below = true;
    double limsup = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < tail; ++k) {
        const double v = y[begin + k][0];
        const std::size_t w = k * params.windows / tail;
        if (v > r1) exceeded[w] = true;
        if (!(v < r2)) below = false;
        if (w == params.windows - 1) limsup = std::max(limsup, v);
    }
    const bool cofinal = std::all_of(exceeded.begin(), exceeded.end(), [](bool b) { return b; });
    return Proposition3Report{cofinal, below, limsup, std::move(y)};
}

}  // namespace regula
