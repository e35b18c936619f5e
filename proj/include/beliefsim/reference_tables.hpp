#pragma once

// Published reference values for the seven result tables and the checks
// that compare a simulation against them.
//
// Masses are P(PB in bin | H=T). Tolerances: +/-0.02 absolute per mass,
// +/-0.15 on d', +/-15% relative on per-bin likelihood ratios.

#include <array>
#include <string>
#include <vector>

#include "beliefsim/config.hpp"
#include "beliefsim/report.hpp"

namespace beliefsim {

inline constexpr double kMassTolerance = 0.02;
inline constexpr double kDprimeTolerance = 0.15;
inline constexpr double kRatioRelativeTolerance = 0.15;
inline constexpr double kStrongNaiveDprimeTolerance = 0.05;
/// Upper bound on the Proper Bayes top-bin LR at zero error.
inline constexpr double kCalibratedTopRatio = 8.1;
/// Run count the tolerances above are calibrated for.
inline constexpr std::size_t kReferenceRuns = 20000;

/// Error-range columns shown in Tables 1-5 and 7.
inline constexpr std::array<double, 3> kTableErrorRanges{0.0, 0.4, 1.2};
/// Error-range column groups in Table 6.
inline constexpr std::array<double, 2> kRatioErrorRanges{0.0, 1.2};

using MassColumn = std::array<double, 9>;

/// One published histogram column plus its d'.
struct ReferenceColumn {
    int n;
    double error_range;
    MassColumn mass;
    double dprime;
};

struct ReferenceHistogramTable {
    std::string procedure;
    bool clamped;
    std::vector<ReferenceColumn> columns;
};

/// Tables 1-5 (Table 1 n=7, err 1.2 d' uses 0.46).
const ReferenceHistogramTable& reference_histogram_table(TableId id);

struct ReferenceRatioColumn {
    std::string procedure;
    double error_range;
    MassColumn ratio;
};

/// Table 6 (n=4).
const std::vector<ReferenceRatioColumn>& reference_ratio_table();

struct ReferenceAtomColumn {
    double threshold;
    double error_range;
    std::array<double, 3> mass; // PB = 0.0, 0.5, 1.0
};

/// Table 7 (n=4).
const std::vector<ReferenceAtomColumn>& reference_atom_table();

/// The cells a table needs, as a config (seed and run count filled in).
ExperimentConfig reproduce_config(TableId id, std::uint64_t seed, std::size_t runs);

struct Check {
    std::string name;
    double observed = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string kind; // "abs", "rel", "exact", "order"
};

/// Compares results with the reference values and the table's structural
/// and ordering properties.
std::vector<Check> check_table(TableId id, const ResultSet& results);

} // namespace beliefsim
