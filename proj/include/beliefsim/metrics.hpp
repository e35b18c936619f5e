#pragma once

// Evaluation quantities for one run or one aggregated cell.
//
// Histograms are expected masses under the TRUE model: for hypothesis h,
// bin k receives sum_e P(e | h) * [PB(e) in bin k]. Continuous procedures
// use nine bins with edges 0 .11 .22 .33 .44 .56 .67 .78 .89 1 (left-closed,
// last bin closed at 1); atomic procedures use the three atoms 0, 0.5, 1.

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "beliefsim/chain_model.hpp"

namespace beliefsim {

inline constexpr std::size_t kBinCount = 9;
inline constexpr std::array<double, kBinCount + 1> kBinEdges{0.0,  0.11, 0.22, 0.33, 0.44,
                                                               0.56, 0.67, 0.78, 0.89, 1.0};

enum class BinScheme { Continuous, Atoms };

std::size_t bin_count(BinScheme scheme);

/// Row labels: ".00-.11" ... ".89-1.0", or "0.0" "0.5" "1.0" for atoms.
const std::vector<std::string>& bin_labels(BinScheme scheme);

std::size_t bin_index(double pb);

/// 0, 0.5 and 1 map to 0, 1, 2; anything else throws std::domain_error.
std::size_t atom_index(double pb);

std::size_t bin_for(BinScheme scheme, double pb);

struct ConditionalSummary {
    double mean = 0.0;
    double variance = 0.0;
};

struct Accumulation {
    std::vector<double> hist_true;
    std::vector<double> hist_false;
    ConditionalSummary given_true;
    ConditionalSummary given_false;
};

/// `pb_by_state` is indexed by state mask and must cover all 2^n states.
Accumulation accumulate(const ChainModel& true_model, std::span<const double> pb_by_state,
                        BinScheme scheme = BinScheme::Continuous);

/// (mean_T - mean_F) / sqrt(var_T + var_F). A zero denominator saturates to
/// +/-inf by the sign of the mean difference, or 0 when the means agree.
double dprime(const ConditionalSummary& given_true, const ConditionalSummary& given_false);

/// Per-bin ratio hist_true / hist_false. 0/0 is NaN (undefined), x/0 is +inf.
std::vector<double> lr_table(std::span<const double> hist_true, std::span<const double> hist_false);

/// Expected squared error sum_{h,e} P(h,e) (PB(e) - [h=T])^2.
double brier(const ChainModel& true_model, std::span<const double> pb_by_state);

/// Sufficient statistics of one run, summed across runs and then averaged.
/// Moments are raw (E[PB], E[PB^2]) so pooling across runs stays exact.
struct RunStatistics {
    std::vector<double> hist_true;
    std::vector<double> hist_false;
    double m1_true = 0.0;
    double m2_true = 0.0;
    double m1_false = 0.0;
    double m2_false = 0.0;
    double brier = 0.0;
    std::size_t degenerate = 0;
    std::size_t runs = 0;

    explicit RunStatistics(BinScheme scheme = BinScheme::Continuous);

    RunStatistics& operator+=(const RunStatistics& other);
};

/// Statistics for one run given per-state PBs and the true joint table.
/// Writes into `out` (which must have the right bin count) to avoid
/// reallocating in the simulation loop.
void record_run(const JointTable& true_joints, double true_prior, std::span<const double> pb_by_state,
                std::size_t degenerate, BinScheme scheme, RunStatistics& out);

/// Means over `stats.runs` runs.
struct AggregateSummary {
    std::vector<double> hist_true;
    std::vector<double> hist_false;
    ConditionalSummary given_true;
    ConditionalSummary given_false;
    double dprime = 0.0;
    std::vector<double> lr;
    double brier = 0.0;
};

AggregateSummary summarize(const RunStatistics& stats);

} // namespace beliefsim
