#include "beliefsim/inference.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <stdexcept>

namespace beliefsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Ratio {
    double value = 1.0;
    bool degenerate = false;
};

// x/0 is +inf, 0/0 is neutral; both flagged.
Ratio safe_ratio(double num, double den) {
    if (den == 0.0) return num == 0.0 ? Ratio{1.0, true} : Ratio{kInf, true};
    return {num / den, false};
}

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_number(const std::string& text) {
    double v = 0.0;
    const char* end = text.data() + text.size();
    auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end) throw std::invalid_argument("bad number '" + text + "'");
    return v;
}

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

VoteDirection direction_of(double ratio) {
    if (ratio > 1.0) return VoteDirection::Pro;
    if (ratio < 1.0) return VoteDirection::Con;
    return VoteDirection::Neutral;
}

EvidenceVote make_vote(std::optional<int> node, Ratio r, const LinearOptions& options) {
    EvidenceVote vote;
    vote.node = node;
    vote.likelihood_ratio = r.value;
    vote.degenerate = r.degenerate;
    vote.direction = direction_of(r.value);
    if (options.kind == LinearKind::Strong && options.band.contains(r.value)) vote.direction = VoteDirection::Neutral;
    if (vote.direction == VoteDirection::Neutral) return vote;
    if (options.kind == LinearKind::Weighted) {
        vote.weight = std::min(std::abs(std::log(r.value)) / options.weight_cap, 1.0);
    } else {
        vote.weight = 1.0;
    }
    return vote;
}

} // namespace

void Band::validate() const {
    if (!(lower > 0.0 && lower < 1.0 && upper > 1.0 && std::isfinite(upper))) {
        throw std::invalid_argument("neutral band must satisfy 0 < lower < 1 < upper");
    }
}

std::string procedure_label(const Procedure& proc) {
    return std::visit(Overloaded{
                          [](const ProperBayes&) -> std::string { return "proper_bayes"; },
                          [](const SimpleNaive&) -> std::string { return "simple_naive"; },
                          [](const StrongNaive&) -> std::string { return "strong_naive"; },
                          [](const ComplexLinear&) -> std::string { return "complex_linear"; },
                          [](const SimpleLinear&) -> std::string { return "simple_linear"; },
                          [](const StrongLinear&) -> std::string { return "strong_linear"; },
                          [](const WeightedLinear&) -> std::string { return "weighted_linear"; },
                          [](const DefaultRule& d) { return "default:" + format_number(d.threshold); },
                      },
                      proc);
}

Procedure parse_procedure(const std::string& token, const ProcedureDefaults& defaults) {
    std::string name = token;
    std::optional<double> param;
    if (auto colon = token.find(':'); colon != std::string::npos) {
        name = token.substr(0, colon);
        param = parse_number(token.substr(colon + 1));
    }
    Procedure proc;
    if (name == "proper_bayes") {
        proc = ProperBayes{};
    } else if (name == "simple_naive") {
        proc = SimpleNaive{};
    } else if (name == "strong_naive") {
        proc = StrongNaive{defaults.band};
    } else if (name == "complex_linear") {
        proc = ComplexLinear{};
    } else if (name == "simple_linear") {
        proc = SimpleLinear{};
    } else if (name == "strong_linear") {
        proc = StrongLinear{defaults.band};
    } else if (name == "weighted_linear") {
        proc = WeightedLinear{param.value_or(defaults.weight_cap)};
        param.reset();
    } else if (name == "default") {
        proc = DefaultRule{param.value_or(defaults.default_threshold)};
        param.reset();
    } else {
        throw std::invalid_argument("unknown procedure '" + token + "'");
    }
    if (param) throw std::invalid_argument("procedure '" + name + "' takes no parameter");
    validate_procedure(proc);
    return proc;
}

void validate_procedure(const Procedure& proc) {
    std::visit(Overloaded{
                   [](const StrongNaive& p) { p.band.validate(); },
                   [](const StrongLinear& p) { p.band.validate(); },
                   [](const WeightedLinear& p) {
                       if (!(p.cap > 0.0 && std::isfinite(p.cap))) {
                           throw std::invalid_argument("weighted linear cap must be positive");
                       }
                   },
                   [](const DefaultRule& p) {
                       if (!(p.threshold > 1.0 && std::isfinite(p.threshold))) {
                           throw std::invalid_argument("default rule threshold must exceed 1");
                       }
                   },
                   [](const auto&) {},
               },
               proc);
}

bool has_atomic_output(const Procedure& proc) { return std::holds_alternative<DefaultRule>(proc); }

BeliefTables tabulate(const ChainModel& belief) {
    BeliefTables t;
    t.joints = joint_table(belief);
    t.marginals = marginal_table(belief, t.joints);
    return t;
}

// ---------------------------------------------------------------------------
// Bayesian procedures

PosteriorBelief proper_bayes(const ChainModel& belief, const EvidentialState& e) {
    const auto p = posterior_true(belief, e);
    return {p.value, p.degenerate};
}

PosteriorBelief proper_bayes(const BeliefTables& tables, const EvidentialState& e) {
    const double t = tables.joints.given_true[e.mask()];
    const double f = tables.joints.given_false[e.mask()];
    if (t + f == 0.0) return {0.5, true};
    return {t / (t + f), false};
}

PosteriorBelief naive_bayes(const ChainModel& belief, const EvidentialState& e, std::optional<Band> band) {
    if (e.size() != belief.n()) throw ModelError(ModelError::Kind::ShapeMismatch, "state length mismatch");
    return naive_bayes(tabulate(belief), e, band);
}

PosteriorBelief naive_bayes(const BeliefTables& tables, const EvidentialState& e, std::optional<Band> band) {
    const auto& m = tables.marginals;
    bool degenerate = false;
    // Odds kept as a numerator/denominator pair so a zero marginal saturates
    // instead of producing inf * 0.
    double num = m.prior;
    double den = 1.0 - m.prior;
    for (int i = 0; i < e.size(); ++i) {
        const double lt = m.likelihood(i, e[i], Hypothesis::True);
        const double lf = m.likelihood(i, e[i], Hypothesis::False);
        const Ratio r = safe_ratio(lt, lf);
        degenerate = degenerate || r.degenerate;
        if (lt == 0.0 && lf == 0.0) continue;
        if (band && band->contains(r.value)) continue;
        num *= lt;
        den *= lf;
    }
    if (num + den == 0.0) return {0.5, true};
    return {num / (num + den), degenerate};
}

// ---------------------------------------------------------------------------
// Linear tallies

namespace {

Ratio item_ratio(const ChainModel& belief, const BeliefTables& tables, const EvidentialState& e, int i,
                 LinearKind kind) {
    double lt = 0.0;
    double lf = 0.0;
    if (kind == LinearKind::Complex) {
        const std::uint32_t prefix = e.mask() & ((std::uint32_t{1} << i) - 1);
        const auto params = belief.parameters();
        const double pt = params[ChainModel::parameter_index(i, Hypothesis::True, prefix)];
        const double pf = params[ChainModel::parameter_index(i, Hypothesis::False, prefix)];
        lt = e[i] ? pt : 1.0 - pt;
        lf = e[i] ? pf : 1.0 - pf;
    } else {
        lt = tables.marginals.likelihood(i, e[i], Hypothesis::True);
        lf = tables.marginals.likelihood(i, e[i], Hypothesis::False);
    }
    return safe_ratio(lt, lf);
}

} // namespace

std::vector<EvidenceVote> collect_votes(const ChainModel& belief, const BeliefTables& tables,
                                        const EvidentialState& e, const LinearOptions& options) {
    if (e.size() != belief.n()) throw ModelError(ModelError::Kind::ShapeMismatch, "state length mismatch");
    std::vector<EvidenceVote> votes;
    votes.reserve(e.size() + 1);
    votes.push_back(make_vote(std::nullopt, safe_ratio(belief.prior(), 1.0 - belief.prior()), options));
    for (int i = 0; i < e.size(); ++i) votes.push_back(make_vote(i, item_ratio(belief, tables, e, i, options.kind), options));
    return votes;
}

PosteriorBelief linear(const ChainModel& belief, const EvidentialState& e, const LinearOptions& options) {
    return linear(belief, tabulate(belief), e, options);
}

PosteriorBelief linear(const ChainModel& belief, const BeliefTables& tables, const EvidentialState& e,
                       const LinearOptions& options) {
    if (e.size() != belief.n()) throw ModelError(ModelError::Kind::ShapeMismatch, "state length mismatch");
    EvidenceVote vote = make_vote(std::nullopt, safe_ratio(belief.prior(), 1.0 - belief.prior()), options);
    double sum = vote.signed_weight();
    bool degenerate = vote.degenerate;
    for (int i = 0; i < e.size(); ++i) {
        vote = make_vote(i, item_ratio(belief, tables, e, i, options.kind), options);
        sum += vote.signed_weight();
        degenerate = degenerate || vote.degenerate;
    }
    // (s + m) / 2m keeps unit-weight tallies bit-identical to k / m.
    const double items = static_cast<double>(e.size() + 1);
    return {(sum + items) / (2.0 * items), degenerate};
}

// ---------------------------------------------------------------------------
// Default rule

std::vector<double> default_rule_ratios(const BeliefTables& tables, const EvidentialState& e, bool* degenerate) {
    const auto& m = tables.marginals;
    std::vector<double> ratios;
    ratios.reserve(e.size() + 1);
    bool flag = false;
    Ratio r = safe_ratio(m.prior, 1.0 - m.prior);
    flag = flag || r.degenerate;
    ratios.push_back(r.value);
    for (int i = 0; i < e.size(); ++i) {
        r = safe_ratio(m.likelihood(i, e[i], Hypothesis::True), m.likelihood(i, e[i], Hypothesis::False));
        flag = flag || r.degenerate;
        ratios.push_back(r.value);
    }
    if (degenerate) *degenerate = flag;
    return ratios;
}

double default_decision(const std::vector<double>& ratios, double threshold) {
    const double low = 1.0 / threshold;
    const bool confirm = std::any_of(ratios.begin(), ratios.end(), [&](double r) { return r > threshold; });
    const bool contradict = std::any_of(ratios.begin(), ratios.end(), [&](double r) { return r < low; });
    if (confirm && !contradict) return 1.0;
    if (contradict && !confirm) return 0.0;
    return 0.5;
}

PosteriorBelief default_rule(const ChainModel& belief, const EvidentialState& e, double threshold) {
    if (e.size() != belief.n()) throw ModelError(ModelError::Kind::ShapeMismatch, "state length mismatch");
    return default_rule(tabulate(belief), e, threshold);
}

PosteriorBelief default_rule(const BeliefTables& tables, const EvidentialState& e, double threshold) {
    const auto& m = tables.marginals;
    const double low = 1.0 / threshold;
    bool confirm = false;
    bool contradict = false;
    Ratio r = safe_ratio(m.prior, 1.0 - m.prior);
    bool degenerate = r.degenerate;
    for (int i = -1; i < e.size(); ++i) {
        if (i >= 0) {
            r = safe_ratio(m.likelihood(i, e[i], Hypothesis::True), m.likelihood(i, e[i], Hypothesis::False));
            degenerate = degenerate || r.degenerate;
        }
        confirm = confirm || r.value > threshold;
        contradict = contradict || r.value < low;
    }
    const double value = confirm == contradict ? 0.5 : (confirm ? 1.0 : 0.0);
    return {value, degenerate};
}

// ---------------------------------------------------------------------------

PosteriorBelief posterior(const Procedure& proc, const ChainModel& belief, const EvidentialState& e) {
    if (e.size() != belief.n()) throw ModelError(ModelError::Kind::ShapeMismatch, "state length mismatch");
    return posterior(proc, belief, tabulate(belief), e);
}

PosteriorBelief posterior(const Procedure& proc, const ChainModel& belief, const BeliefTables& tables,
                          const EvidentialState& e) {
    return std::visit(
        Overloaded{
            [&](const ProperBayes&) { return proper_bayes(tables, e); },
            [&](const SimpleNaive&) { return naive_bayes(tables, e); },
            [&](const StrongNaive& p) { return naive_bayes(tables, e, p.band); },
            [&](const ComplexLinear&) { return linear(belief, tables, e, LinearOptions{LinearKind::Complex, {}, kDefaultWeightCap}); },
            [&](const SimpleLinear&) { return linear(belief, tables, e, LinearOptions{LinearKind::Simple, {}, kDefaultWeightCap}); },
            [&](const StrongLinear& p) { return linear(belief, tables, e, LinearOptions{LinearKind::Strong, p.band, kDefaultWeightCap}); },
            [&](const WeightedLinear& p) { return linear(belief, tables, e, {LinearKind::Weighted, {}, p.cap}); },
            [&](const DefaultRule& p) { return default_rule(tables, e, p.threshold); },
        },
        proc);
}

} // namespace beliefsim
