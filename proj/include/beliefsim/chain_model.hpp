#pragma once

// Chain-factored distributions over a binary hypothesis H and n binary
// evidence nodes E0..E(n-1):
//
//   P(H, E0..En-1) = P(H) * prod_i P(Ei | H, E0..E(i-1))
//
// Only the "=T" probabilities are stored; "=F" is always the complement, so
// any parameter vector with entries in [0,1] is a coherent joint. The same
// type holds a "true" model and a perturbed belief model.
//
// Parameter layout (also the draw/perturb order):
//   index 0                   P(H=T)
//   block for node i          2^(i+1) entries starting at 2^(i+1) - 1
// Inside a block the conditioning assignment (H, E0..E(i-1)) is read as a
// big-endian binary number with T=0 and F=1, so the first entry is
// P(Ei=T | H=T, E0=T, ...) and H is the most significant position.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "beliefsim/random.hpp"

namespace beliefsim {

inline constexpr int kMinNodes = 1;
inline constexpr int kMaxNodes = 12;

enum class Hypothesis : std::uint8_t { False = 0, True = 1 };

constexpr Hypothesis operator!(Hypothesis h) noexcept {
    return h == Hypothesis::True ? Hypothesis::False : Hypothesis::True;
}

class ModelError : public std::invalid_argument {
public:
    enum class Kind { NodeCount, ShapeMismatch, OutOfRange, InvalidBounds };

    ModelError(Kind kind, const std::string& what) : std::invalid_argument(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Number of evidential states for n nodes.
constexpr std::size_t state_count(int n) noexcept { return std::size_t{1} << n; }

/// Total parameter count 2^(n+1) - 1 (prior plus conditional entries).
constexpr std::size_t parameter_count(int n) noexcept { return (std::size_t{1} << (n + 1)) - 1; }

/// A full true/false assignment to the evidence nodes. Bit i of the mask is
/// set when node i is true; node 0 is "A".
class EvidentialState {
public:
    EvidentialState(int n, std::uint32_t true_mask);
    EvidentialState(std::initializer_list<bool> values);
    explicit EvidentialState(const std::vector<bool>& values);

    int size() const noexcept { return n_; }
    std::uint32_t mask() const noexcept { return mask_; }
    bool operator[](int i) const noexcept { return ((mask_ >> i) & 1U) != 0; }

    /// The first k nodes as a state of length k.
    EvidentialState prefix(int k) const;

    std::string to_string() const;

    friend bool operator==(const EvidentialState&, const EvidentialState&) = default;

private:
    int n_ = 0;
    std::uint32_t mask_ = 0;
};

/// All 2^n states in mask order.
std::vector<EvidentialState> all_states(int n);

/// Width of the uniform calibration-error interval, in [0, 2].
class ErrorRange {
public:
    explicit ErrorRange(double range);
    double value() const noexcept { return range_; }

private:
    double range_;
};

class ChainModel {
public:
    /// Validated constructor. `cond` holds the 2^(n+1) - 2 conditional
    /// entries in layout order.
    ChainModel(int n, double prior, std::vector<double> cond);

    /// From a complete parameter vector (prior first).
    static ChainModel from_parameters(int n, std::vector<double> params);

    int n() const noexcept { return n_; }
    double prior() const noexcept { return params_[0]; }
    std::span<const double> parameters() const noexcept { return params_; }

    /// P(Ei=T | h, E0..E(i-1) = prefix) for a prefix of length i.
    double cond(int node, Hypothesis h, const EvidentialState& prefix) const;

    /// Index of P(Ei=T | h, prefix) in parameters(); prefix bit j is node j.
    static std::size_t parameter_index(int node, Hypothesis h, std::uint32_t prefix_mask);

    friend bool operator==(const ChainModel&, const ChainModel&) = default;

private:
    struct Unchecked {};
    ChainModel(Unchecked, int n, std::vector<double> params) : n_(n), params_(std::move(params)) {}

    int n_;
    std::vector<double> params_;

    friend ChainModel sample_true_model(int, UniformSource&);
    friend ChainModel perturb(const ChainModel&, ErrorRange, UniformSource&);
    friend ChainModel clamp_parameters(const ChainModel&, double, double);
    friend ChainModel relabel_hypothesis(const ChainModel&);
};

/// Result of a division that can hit a zero denominator.
struct FlaggedProbability {
    double value = 0.0;
    bool degenerate = false;
};

/// Every parameter drawn independently from U[0,1), prior first, then the
/// node blocks in layout order.
ChainModel sample_true_model(int n, UniformSource& u);

/// Replaces each parameter P by a uniform draw on
/// [max(0, P - range/2), min(1, P + range/2)]. Range 0 returns the input
/// unchanged without consuming draws.
ChainModel perturb(const ChainModel& model, ErrorRange err, UniformSource& u);

/// Clips every parameter into [lo, hi].
ChainModel clamp_parameters(const ChainModel& model, double lo, double hi);

/// Swaps the roles of H=T and H=F: prior becomes 1 - prior and the
/// conditional entries under H=T trade places with those under H=F.
ChainModel relabel_hypothesis(const ChainModel& model);

double joint(const ChainModel& model, Hypothesis h, const EvidentialState& e);

/// P(H=T | e). A zero denominator gives 0.5 with the degenerate flag.
FlaggedProbability posterior_true(const ChainModel& model, const EvidentialState& e);

/// P(e | h). Zero P(h) gives 0 with the degenerate flag.
FlaggedProbability evidence_prob_given_h(const ChainModel& model, const EvidentialState& e, Hypothesis h);

/// P(Ei = v | h), marginalizing over every other evidence node.
double marginal_likelihood(const ChainModel& model, int node, bool value, Hypothesis h);

/// P(Ei = v | h, E0..E(i-1) = prefix), read directly from the chain table.
double conditional_likelihood_given_prefix(const ChainModel& model, int node, bool value, Hypothesis h,
                                           const EvidentialState& prefix);

/// Joint probabilities for every state, indexed by state mask.
struct JointTable {
    std::vector<double> given_true;  // P(H=T, e)
    std::vector<double> given_false; // P(H=F, e)
};

JointTable joint_table(const ChainModel& model);

/// P(Ei=T | h) for every node, computed in one pass over the states.
struct MarginalTable {
    double prior = 0.5;
    std::vector<double> true_given_true;
    std::vector<double> true_given_false;

    double likelihood(int node, bool value, Hypothesis h) const;
};

MarginalTable marginal_table(const ChainModel& model, const JointTable& joints);
MarginalTable marginal_table(const ChainModel& model);

} // namespace beliefsim
