#pragma once

// Monte Carlo sweep driver.
//
// One run: sample a true model, perturb it at the cell's error range,
// optionally clamp the belief parameters, evaluate the procedure on every
// evidential state of the belief model, and weight the resulting PBs by the
// TRUE model. Cells are averaged over runs_per_cell runs.
//
// Runs are seeded per (n, error range, clamp) slice and run index, so every
// procedure in a slice sees the same true and belief models. Runs are
// grouped into fixed blocks that are reduced in block order; the result is
// bit-identical for any worker count.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "beliefsim/chain_model.hpp"
#include "beliefsim/config.hpp"
#include "beliefsim/inference.hpp"
#include "beliefsim/metrics.hpp"

namespace beliefsim {

/// The part of a cell that determines its random models.
struct SliceKey {
    int n = 4;
    double error_range = 0.0;
    std::optional<ClampBounds> clamp;
};

struct CellId {
    Procedure procedure;
    int n = 4;
    double error_range = 0.0;
    std::optional<ClampBounds> clamp;

    SliceKey slice() const { return {n, error_range, clamp}; }
};

std::uint64_t derive_run_seed(std::uint64_t master, const SliceKey& slice, std::uint64_t run_index);

struct CellResult {
    CellId cell;
    BinScheme scheme = BinScheme::Continuous;
    std::size_t runs = 0;
    std::size_t degenerate_count = 0;
    std::vector<double> hist_true;
    std::vector<double> hist_false;
    ConditionalSummary given_true;
    ConditionalSummary given_false;
    double dprime = 0.0;
    std::vector<double> lr;
    double brier = 0.0;
};

struct RunOptions {
    /// 0 picks std::thread::hardware_concurrency().
    unsigned workers = 0;
    /// Progress lines (one per finished slice); may be empty.
    std::function<void(const std::string&)> progress;
};

/// Per-procedure statistics of a single run on given true/belief models.
std::vector<RunStatistics> evaluate_run(const ChainModel& true_model, const ChainModel& belief_model,
                                        const std::vector<Procedure>& procedures);

/// Runs one slice for several procedures, sharing models between them.
std::vector<CellResult> run_slice(const ExperimentConfig& config, const SliceKey& slice,
                                  const std::vector<Procedure>& procedures, const RunOptions& options = {});

CellResult run_cell(const ExperimentConfig& config, const CellId& cell, const RunOptions& options = {});

/// Full cross product procedures x evidence_counts x error_ranges, ordered
/// by procedure, then n, then error range (all in config order).
std::vector<CellResult> run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

} // namespace beliefsim
