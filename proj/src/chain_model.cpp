#include "beliefsim/chain_model.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace beliefsim {

namespace {

void require_node_count(int n) {
    if (n < kMinNodes || n > kMaxNodes) {
        throw ModelError(ModelError::Kind::NodeCount,
                         "evidence node count " + std::to_string(n) + " outside 1.." + std::to_string(kMaxNodes));
    }
}

void require_probability(double p, std::size_t index) {
    if (!(p >= 0.0 && p <= 1.0)) {
        std::ostringstream msg;
        msg << "parameter " << index << " = " << p << " outside [0,1]";
        throw ModelError(ModelError::Kind::OutOfRange, msg.str());
    }
}

std::uint32_t block_offset(int node) { return (std::uint32_t{1} << (node + 1)) - 1; }

} // namespace

// ---------------------------------------------------------------------------
// EvidentialState

EvidentialState::EvidentialState(int n, std::uint32_t true_mask) : n_(n), mask_(true_mask) {
    if (n < 0 || n > kMaxNodes) {
        throw ModelError(ModelError::Kind::NodeCount, "evidential state length " + std::to_string(n) + " unsupported");
    }
    if (n < 32 && (true_mask >> n) != 0) {
        throw ModelError(ModelError::Kind::ShapeMismatch, "state mask has bits beyond node count");
    }
}

EvidentialState::EvidentialState(std::initializer_list<bool> values)
    : EvidentialState(std::vector<bool>(values)) {}

EvidentialState::EvidentialState(const std::vector<bool>& values) {
    if (values.size() > static_cast<std::size_t>(kMaxNodes)) {
        throw ModelError(ModelError::Kind::NodeCount, "evidential state too long");
    }
    n_ = static_cast<int>(values.size());
    for (int i = 0; i < n_; ++i) {
        if (values[i]) mask_ |= std::uint32_t{1} << i;
    }
}

EvidentialState EvidentialState::prefix(int k) const {
    if (k < 0 || k > n_) throw ModelError(ModelError::Kind::ShapeMismatch, "prefix longer than state");
    return EvidentialState(k, mask_ & ((std::uint32_t{1} << k) - 1));
}

std::string EvidentialState::to_string() const {
    std::string s;
    for (int i = 0; i < n_; ++i) {
        if (i) s += ',';
        s += static_cast<char>('A' + i);
        s += (*this)[i] ? "=T" : "=F";
    }
    return s;
}

std::vector<EvidentialState> all_states(int n) {
    std::vector<EvidentialState> out;
    out.reserve(state_count(n));
    for (std::uint32_t m = 0; m < state_count(n); ++m) out.emplace_back(n, m);
    return out;
}

ErrorRange::ErrorRange(double range) : range_(range) {
    if (!(range >= 0.0 && range <= 2.0)) {
        throw ModelError(ModelError::Kind::OutOfRange, "error range " + std::to_string(range) + " outside [0,2]");
    }
}

// ---------------------------------------------------------------------------
// ChainModel

ChainModel::ChainModel(int n, double prior, std::vector<double> cond) : n_(n) {
    require_node_count(n);
    const std::size_t expected = parameter_count(n) - 1;
    if (cond.size() != expected) {
        std::ostringstream msg;
        msg << "conditional table has " << cond.size() << " entries, " << n << " nodes need " << expected;
        throw ModelError(ModelError::Kind::ShapeMismatch, msg.str());
    }
    require_probability(prior, 0);
    for (std::size_t i = 0; i < cond.size(); ++i) require_probability(cond[i], i + 1);
    params_.reserve(expected + 1);
    params_.push_back(prior);
    params_.insert(params_.end(), cond.begin(), cond.end());
}

ChainModel ChainModel::from_parameters(int n, std::vector<double> params) {
    require_node_count(n);
    if (params.empty()) throw ModelError(ModelError::Kind::ShapeMismatch, "empty parameter vector");
    const double prior = params.front();
    return ChainModel(n, prior, std::vector<double>(params.begin() + 1, params.end()));
}

std::size_t ChainModel::parameter_index(int node, Hypothesis h, std::uint32_t prefix_mask) {
    std::uint32_t key = h == Hypothesis::True ? 0U : 1U;
    for (int j = 0; j < node; ++j) key = (key << 1) | (((prefix_mask >> j) & 1U) ? 0U : 1U);
    return block_offset(node) + key;
}

double ChainModel::cond(int node, Hypothesis h, const EvidentialState& prefix) const {
    if (node < 0 || node >= n_) throw ModelError(ModelError::Kind::ShapeMismatch, "node index out of range");
    if (prefix.size() != node) throw ModelError(ModelError::Kind::ShapeMismatch, "prefix length must equal node index");
    return params_[parameter_index(node, h, prefix.mask())];
}

// ---------------------------------------------------------------------------
// Generation

ChainModel sample_true_model(int n, UniformSource& u) {
    require_node_count(n);
    std::vector<double> params(parameter_count(n));
    for (double& p : params) p = u.next();
    return ChainModel(ChainModel::Unchecked{}, n, std::move(params));
}

ChainModel perturb(const ChainModel& model, ErrorRange err, UniformSource& u) {
    const double half = err.value() / 2.0;
    if (half == 0.0) return model;
    std::vector<double> params(model.params_.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double p = model.params_[i];
        const double lo = std::max(0.0, p - half);
        const double hi = std::min(1.0, p + half);
        params[i] = lo + (hi - lo) * u.next();
    }
    return ChainModel(ChainModel::Unchecked{}, model.n_, std::move(params));
}

ChainModel clamp_parameters(const ChainModel& model, double lo, double hi) {
    if (!(lo >= 0.0 && hi <= 1.0 && lo < hi)) {
        throw ModelError(ModelError::Kind::InvalidBounds, "clamp bounds require 0 <= lo < hi <= 1");
    }
    std::vector<double> params(model.params_);
    for (double& p : params) p = std::clamp(p, lo, hi);
    return ChainModel(ChainModel::Unchecked{}, model.n_, std::move(params));
}

ChainModel relabel_hypothesis(const ChainModel& model) {
    std::vector<double> params(model.params_);
    params[0] = 1.0 - model.params_[0];
    for (int i = 0; i < model.n_; ++i) {
        // H is the top bit of the block key, so the H=F half follows the H=T half.
        const std::size_t off = block_offset(i);
        const std::size_t half = std::size_t{1} << i;
        for (std::size_t k = 0; k < half; ++k) std::swap(params[off + k], params[off + half + k]);
    }
    return ChainModel(ChainModel::Unchecked{}, model.n_, std::move(params));
}

// ---------------------------------------------------------------------------
// Queries

namespace {

void require_state(const ChainModel& model, const EvidentialState& e) {
    if (e.size() != model.n()) {
        throw ModelError(ModelError::Kind::ShapeMismatch, "evidential state length " + std::to_string(e.size()) +
                                                              " does not match model with " +
                                                              std::to_string(model.n()) + " nodes");
    }
}

double chain_product(std::span<const double> params, int n, Hypothesis h, std::uint32_t mask) {
    double prob = h == Hypothesis::True ? params[0] : 1.0 - params[0];
    std::uint32_t key = h == Hypothesis::True ? 0U : 1U;
    for (int i = 0; i < n; ++i) {
        const double p = params[block_offset(i) + key];
        const bool v = ((mask >> i) & 1U) != 0;
        prob *= v ? p : 1.0 - p;
        key = (key << 1) | (v ? 0U : 1U);
    }
    return prob;
}

} // namespace

double joint(const ChainModel& model, Hypothesis h, const EvidentialState& e) {
    require_state(model, e);
    return chain_product(model.parameters(), model.n(), h, e.mask());
}

FlaggedProbability posterior_true(const ChainModel& model, const EvidentialState& e) {
    const double t = joint(model, Hypothesis::True, e);
    const double f = joint(model, Hypothesis::False, e);
    const double denom = t + f;
    if (denom == 0.0) return {0.5, true};
    return {t / denom, false};
}

FlaggedProbability evidence_prob_given_h(const ChainModel& model, const EvidentialState& e, Hypothesis h) {
    const double ph = h == Hypothesis::True ? model.prior() : 1.0 - model.prior();
    const double j = joint(model, h, e);
    if (ph == 0.0) return {0.0, true};
    return {j / ph, false};
}

double marginal_likelihood(const ChainModel& model, int node, bool value, Hypothesis h) {
    if (node < 0 || node >= model.n()) throw ModelError(ModelError::Kind::ShapeMismatch, "node index out of range");
    return marginal_table(model).likelihood(node, value, h);
}

double conditional_likelihood_given_prefix(const ChainModel& model, int node, bool value, Hypothesis h,
                                           const EvidentialState& prefix) {
    const double p = model.cond(node, h, prefix);
    return value ? p : 1.0 - p;
}

JointTable joint_table(const ChainModel& model) {
    const std::size_t states = state_count(model.n());
    JointTable table;
    table.given_true.resize(states);
    table.given_false.resize(states);
    const auto params = model.parameters();
    for (std::uint32_t m = 0; m < states; ++m) {
        table.given_true[m] = chain_product(params, model.n(), Hypothesis::True, m);
        table.given_false[m] = chain_product(params, model.n(), Hypothesis::False, m);
    }
    return table;
}

double MarginalTable::likelihood(int node, bool value, Hypothesis h) const {
    const double p = h == Hypothesis::True ? true_given_true[node] : true_given_false[node];
    return value ? p : 1.0 - p;
}

MarginalTable marginal_table(const ChainModel& model, const JointTable& joints) {
    const int n = model.n();
    MarginalTable table;
    table.prior = model.prior();
    table.true_given_true.assign(n, 0.0);
    table.true_given_false.assign(n, 0.0);
    const double p_true = model.prior();
    const double p_false = 1.0 - model.prior();
    for (std::uint32_t m = 0; m < joints.given_true.size(); ++m) {
        for (int i = 0; i < n; ++i) {
            if ((m >> i) & 1U) {
                table.true_given_true[i] += joints.given_true[m];
                table.true_given_false[i] += joints.given_false[m];
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        table.true_given_true[i] = p_true > 0.0 ? table.true_given_true[i] / p_true : 0.0;
        table.true_given_false[i] = p_false > 0.0 ? table.true_given_false[i] / p_false : 0.0;
    }
    return table;
}

MarginalTable marginal_table(const ChainModel& model) { return marginal_table(model, joint_table(model)); }

} // namespace beliefsim
