#pragma once
// Decision criteria over a finite loss matrix L(theta, u):
//
//   minimax     L1(u) = max_theta L(theta, u)
//   bayes       L2(u) = sum_theta mu(theta) L(theta, u)
//   regularity  L3(u) = sup_{p in P} sum_theta p(theta) L(theta, u)
//
// L3 reduces to L2 for P = {mu} and to L1 for P = the whole simplex.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "regula/empirics.hpp"
#include "regula/measure.hpp"
#include "regula/realization.hpp"

namespace regula {

class LossMatrix {
public:
    LossMatrix(std::vector<std::string> theta_labels, std::vector<std::string> decision_labels,
               std::vector<double> values);

    const Alphabet& thetas() const noexcept { return thetas_; }
    const std::vector<std::string>& decisions() const noexcept { return decisions_; }
    std::size_t theta_count() const noexcept { return thetas_.size(); }
    std::size_t decision_count() const noexcept { return decisions_.size(); }
    double operator()(std::size_t theta, std::size_t u) const { return values_.at(theta * decision_count() + u); }
    /// L(theta, .) across decisions.
    std::span<const double> row(std::size_t theta) const;
    /// L(., u) as a function on the theta alphabet.
    TestFunction loss_of(std::size_t u) const;
    /// Index of a decision label; throws DataError for unknown labels.
    std::size_t decision_index(const std::string& label) const;

private:
    Alphabet thetas_;
    std::vector<std::string> decisions_;
    std::vector<double> values_;
};

enum class CriterionKind { Minimax, Bayes, Regularity };

struct CriterionReport {
    CriterionKind kind;
    std::vector<double> values;
    /// Every decision within the tie tolerance of the minimum, sorted by
    /// label.
    std::vector<std::size_t> argmin;
    /// Regularity criterion only: per decision, the indices of the points
    /// of P attaining the sup.
    std::vector<std::vector<std::size_t>> worst_case;
};

/// Ties: |v - min| <= 1e-12 * max(1, |min|).
std::vector<std::size_t> argmin_set(const std::vector<double>& values, const std::vector<std::string>& labels);

CriterionReport minimax(const LossMatrix& loss);
CriterionReport bayes(const LossMatrix& loss, const Measure& mu);
/// Max over the points of P; for a convex P the vertices attain the sup.
CriterionReport regularity_criterion(const LossMatrix& loss, const Regularity& regularity);

struct Proposition3Params {
    std::size_t windows = 5;
    double tail_fraction = 0.5;
};

struct Proposition3Report {
    /// Every tail window contains some lambda with average loss > r1.
    bool r1_exceeded_cofinally;
    /// Every lambda of the tail has average loss < r2.
    bool r2_respected_eventually;
    /// Max average loss over the final window.
    double empirical_limsup;
    /// Running average loss y_lambda for plotting.
    Trajectory average_loss;
};

/// Finite-horizon check of the two sides of the upper-bound property of L3
/// along a sampling net: averages exceed any r1 < L3(u) cofinally and stay
/// below any r2 > L3(u) eventually. r1 < L3(u) < r2 is not enforced.
Proposition3Report verify_proposition3(const SamplingNet& net, const LossMatrix& loss, const std::string& decision,
                                       double r1, double r2, const Proposition3Params& params = {});

}  // namespace regula
