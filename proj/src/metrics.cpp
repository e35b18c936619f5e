#include "beliefsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace beliefsim {

std::size_t bin_count(BinScheme scheme) { return scheme == BinScheme::Continuous ? kBinCount : 3; }

const std::vector<std::string>& bin_labels(BinScheme scheme) {
    static const std::vector<std::string> continuous{".00-.11", ".11-.22", ".22-.33", ".33-.44", ".44-.56",
                                                     ".56-.67", ".67-.78", ".78-.89", ".89-1.0"};
    static const std::vector<std::string> atoms{"0.0", "0.5", "1.0"};
    return scheme == BinScheme::Continuous ? continuous : atoms;
}

std::size_t bin_index(double pb) {
    // upper_bound over the interior edges gives left-closed bins; 1.0 lands
    // past the last interior edge and so in bin 8.
    const auto first = kBinEdges.begin() + 1;
    const auto last = kBinEdges.end() - 1;
    return static_cast<std::size_t>(std::upper_bound(first, last, pb) - first);
}

std::size_t atom_index(double pb) {
    if (pb == 0.0) return 0;
    if (pb == 0.5) return 1;
    if (pb == 1.0) return 2;
    throw std::domain_error("posterior " + std::to_string(pb) + " is not one of the atoms 0, 0.5, 1");
}

std::size_t bin_for(BinScheme scheme, double pb) {
    return scheme == BinScheme::Continuous ? bin_index(pb) : atom_index(pb);
}

namespace {

void require_coverage(const ChainModel& model, std::span<const double> pb_by_state) {
    if (pb_by_state.size() != state_count(model.n())) {
        throw std::invalid_argument("posterior map covers " + std::to_string(pb_by_state.size()) + " of " +
                                    std::to_string(state_count(model.n())) + " evidential states");
    }
}

ConditionalSummary from_moments(double m1, double m2) {
    return {m1, std::max(0.0, m2 - m1 * m1)};
}

} // namespace

Accumulation accumulate(const ChainModel& true_model, std::span<const double> pb_by_state, BinScheme scheme) {
    require_coverage(true_model, pb_by_state);
    RunStatistics stats(scheme);
    record_run(joint_table(true_model), true_model.prior(), pb_by_state, 0, scheme, stats);
    Accumulation acc;
    acc.hist_true = std::move(stats.hist_true);
    acc.hist_false = std::move(stats.hist_false);
    acc.given_true = from_moments(stats.m1_true, stats.m2_true);
    acc.given_false = from_moments(stats.m1_false, stats.m2_false);
    return acc;
}

double dprime(const ConditionalSummary& given_true, const ConditionalSummary& given_false) {
    const double diff = given_true.mean - given_false.mean;
    const double spread = std::sqrt(given_true.variance + given_false.variance);
    if (spread == 0.0) {
        if (diff == 0.0) return 0.0;
        return diff > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    }
    return diff / spread;
}

std::vector<double> lr_table(std::span<const double> hist_true, std::span<const double> hist_false) {
    if (hist_true.size() != hist_false.size()) throw std::invalid_argument("histogram sizes differ");
    std::vector<double> out(hist_true.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (hist_false[k] == 0.0) {
            out[k] = hist_true[k] == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                                         : std::numeric_limits<double>::infinity();
        } else {
            out[k] = hist_true[k] / hist_false[k];
        }
    }
    return out;
}

double brier(const ChainModel& true_model, std::span<const double> pb_by_state) {
    require_coverage(true_model, pb_by_state);
    const auto joints = joint_table(true_model);
    double score = 0.0;
    for (std::size_t m = 0; m < pb_by_state.size(); ++m) {
        const double pb = pb_by_state[m];
        score += joints.given_true[m] * (pb - 1.0) * (pb - 1.0) + joints.given_false[m] * pb * pb;
    }
    return score;
}

RunStatistics::RunStatistics(BinScheme scheme)
    : hist_true(bin_count(scheme), 0.0), hist_false(bin_count(scheme), 0.0) {}

RunStatistics& RunStatistics::operator+=(const RunStatistics& other) {
    if (hist_true.size() != other.hist_true.size()) throw std::invalid_argument("bin schemes differ");
    for (std::size_t k = 0; k < hist_true.size(); ++k) {
        hist_true[k] += other.hist_true[k];
        hist_false[k] += other.hist_false[k];
    }
    m1_true += other.m1_true;
    m2_true += other.m2_true;
    m1_false += other.m1_false;
    m2_false += other.m2_false;
    brier += other.brier;
    degenerate += other.degenerate;
    runs += other.runs;
    return *this;
}

void record_run(const JointTable& true_joints, double true_prior, std::span<const double> pb_by_state,
                std::size_t degenerate, BinScheme scheme, RunStatistics& out) {
    const double p_true = true_prior;
    const double p_false = 1.0 - true_prior;
    // Zero P(h) leaves that side empty; it is counted as degenerate.
    const double inv_true = p_true > 0.0 ? 1.0 / p_true : 0.0;
    const double inv_false = p_false > 0.0 ? 1.0 / p_false : 0.0;
    if (p_true == 0.0 || p_false == 0.0) ++degenerate;
    for (std::size_t m = 0; m < pb_by_state.size(); ++m) {
        const double pb = pb_by_state[m];
        const double jt = true_joints.given_true[m];
        const double jf = true_joints.given_false[m];
        const double wt = jt * inv_true;
        const double wf = jf * inv_false;
        const std::size_t k = bin_for(scheme, pb);
        out.hist_true[k] += wt;
        out.hist_false[k] += wf;
        out.m1_true += wt * pb;
        out.m2_true += wt * pb * pb;
        out.m1_false += wf * pb;
        out.m2_false += wf * pb * pb;
        out.brier += jt * (pb - 1.0) * (pb - 1.0) + jf * pb * pb;
    }
    out.degenerate += degenerate;
    out.runs += 1;
}

AggregateSummary summarize(const RunStatistics& stats) {
    AggregateSummary s;
    const double runs = static_cast<double>(std::max<std::size_t>(stats.runs, 1));
    s.hist_true.resize(stats.hist_true.size());
    s.hist_false.resize(stats.hist_false.size());
    for (std::size_t k = 0; k < s.hist_true.size(); ++k) {
        s.hist_true[k] = stats.hist_true[k] / runs;
        s.hist_false[k] = stats.hist_false[k] / runs;
    }
    s.given_true = from_moments(stats.m1_true / runs, stats.m2_true / runs);
    s.given_false = from_moments(stats.m1_false / runs, stats.m2_false / runs);
    s.dprime = dprime(s.given_true, s.given_false);
    s.lr = lr_table(s.hist_true, s.hist_false);
    s.brier = stats.brier / runs;
    return s;
}

} // namespace beliefsim
