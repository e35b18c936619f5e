#pragma once

// Posterior-belief procedures. Each maps a belief model and an evidential
// state to PB(H=T | e) in [0,1]:
//
//   ProperBayes     ratio of belief joints (all dependencies honored)
//   SimpleNaive     prior odds times marginal likelihood ratios
//   StrongNaive     as SimpleNaive, ratios strictly inside the band set to 1
//   ComplexLinear   pro/con tally, item ratios conditioned on the chain prefix
//   SimpleLinear    pro/con tally on marginal ratios
//   StrongLinear    SimpleLinear with items inside the band counted neutral
//   WeightedLinear  SimpleLinear with votes weighted by min(|ln LR| / cap, 1)
//   DefaultRule     1.0 / 0.0 / 0.5 jump rule on a symmetric threshold
//
// Linear tallies count the prior odds as one more item, so
// PB = 0.5 + signed_sum / (2 (n + 1)).

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "beliefsim/chain_model.hpp"

namespace beliefsim {

/// Neutral band (lower, upper) around a likelihood ratio of 1.
struct Band {
    double lower = 2.0 / 3.0;
    double upper = 1.5;

    /// Throws std::invalid_argument unless 0 < lower < 1 < upper.
    void validate() const;
    bool contains(double ratio) const noexcept { return ratio > lower && ratio < upper; }

    friend bool operator==(const Band&, const Band&) = default;
};

inline const double kDefaultWeightCap = std::log(3.0);

struct ProperBayes {};
struct SimpleNaive {};
struct StrongNaive {
    Band band;
};
struct ComplexLinear {};
struct SimpleLinear {};
struct StrongLinear {
    Band band;
};
struct WeightedLinear {
    double cap = kDefaultWeightCap;
};
struct DefaultRule {
    double threshold = 1.5;
};

using Procedure =
    std::variant<ProperBayes, SimpleNaive, StrongNaive, ComplexLinear, SimpleLinear, StrongLinear, WeightedLinear,
                 DefaultRule>;

/// Stable textual name, e.g. "proper_bayes" or "default:2.5".
std::string procedure_label(const Procedure& proc);

/// Parses a label back. Band, cap, and the threshold of a bare "default"
/// come from `defaults` when the token carries no parameter.
struct ProcedureDefaults {
    Band band;
    double weight_cap = kDefaultWeightCap;
    double default_threshold = 1.5;
};
Procedure parse_procedure(const std::string& token, const ProcedureDefaults& defaults = {});

/// Throws std::invalid_argument on invalid parameters.
void validate_procedure(const Procedure& proc);

/// True for procedures whose output is one of {0, 0.5, 1}.
bool has_atomic_output(const Procedure& proc);

struct PosteriorBelief {
    double value = 0.5;
    bool degenerate = false;
};

/// Per-model precomputation shared by all procedures and states.
struct BeliefTables {
    JointTable joints;
    MarginalTable marginals;
};

BeliefTables tabulate(const ChainModel& belief);

enum class VoteDirection { Pro, Con, Neutral };

struct EvidenceVote {
    std::optional<int> node; // empty for the prior item
    VoteDirection direction = VoteDirection::Neutral;
    double weight = 0.0;
    double likelihood_ratio = 1.0;
    bool degenerate = false;

    double signed_weight() const noexcept {
        return direction == VoteDirection::Pro ? weight : direction == VoteDirection::Con ? -weight : 0.0;
    }
};

enum class LinearKind { Complex, Simple, Strong, Weighted };

struct LinearOptions {
    LinearKind kind = LinearKind::Simple;
    Band band;
    double weight_cap = kDefaultWeightCap;
};

PosteriorBelief proper_bayes(const ChainModel& belief, const EvidentialState& e);
PosteriorBelief proper_bayes(const BeliefTables& tables, const EvidentialState& e);

PosteriorBelief naive_bayes(const ChainModel& belief, const EvidentialState& e, std::optional<Band> band = {});
PosteriorBelief naive_bayes(const BeliefTables& tables, const EvidentialState& e, std::optional<Band> band = {});

/// The n + 1 votes (prior first, then nodes in order) behind a linear tally.
std::vector<EvidenceVote> collect_votes(const ChainModel& belief, const BeliefTables& tables,
                                        const EvidentialState& e, const LinearOptions& options);

PosteriorBelief linear(const ChainModel& belief, const EvidentialState& e, const LinearOptions& options);
PosteriorBelief linear(const ChainModel& belief, const BeliefTables& tables, const EvidentialState& e,
                       const LinearOptions& options);

/// Likelihood ratios seen by the default rule: the prior odds followed by
/// each node's marginal ratio.
std::vector<double> default_rule_ratios(const BeliefTables& tables, const EvidentialState& e, bool* degenerate = nullptr);

PosteriorBelief default_rule(const ChainModel& belief, const EvidentialState& e, double threshold);
PosteriorBelief default_rule(const BeliefTables& tables, const EvidentialState& e, double threshold);

/// Jump rule on an arbitrary ratio list: 1.0 if some ratio exceeds T and none
/// is below 1/T, 0.0 for the mirror case, 0.5 otherwise.
double default_decision(const std::vector<double>& ratios, double threshold);

PosteriorBelief posterior(const Procedure& proc, const ChainModel& belief, const EvidentialState& e);
PosteriorBelief posterior(const Procedure& proc, const ChainModel& belief, const BeliefTables& tables,
                          const EvidentialState& e);

} // namespace beliefsim
