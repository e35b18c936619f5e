#include "beliefsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace beliefsim {

namespace {

constexpr std::size_t kBlockRuns = 250;

std::uint64_t double_bits(double v) { return std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v); }

CellResult finish(const CellId& cell, const RunStatistics& stats) {
    const auto summary = summarize(stats);
    CellResult r;
    r.cell = cell;
    r.scheme = has_atomic_output(cell.procedure) ? BinScheme::Atoms : BinScheme::Continuous;
    r.runs = stats.runs;
    r.degenerate_count = stats.degenerate;
    r.hist_true = summary.hist_true;
    r.hist_false = summary.hist_false;
    r.given_true = summary.given_true;
    r.given_false = summary.given_false;
    r.dprime = summary.dprime;
    r.lr = summary.lr;
    r.brier = summary.brier;
    return r;
}

BinScheme scheme_of(const Procedure& p) { return has_atomic_output(p) ? BinScheme::Atoms : BinScheme::Continuous; }

// Evaluates every procedure on one (true, belief) pair and adds the run to
// `out`. `pbs` is scratch space sized to the state count.
void evaluate_into(const ChainModel& truth, const JointTable& true_joints, const ChainModel& belief,
                   const std::vector<Procedure>& procedures, std::vector<double>& pbs,
                   std::vector<RunStatistics>& out) {
    const auto tables = tabulate(belief);
    const std::size_t states = state_count(belief.n());
    pbs.resize(states);
    for (std::size_t p = 0; p < procedures.size(); ++p) {
        std::size_t degenerate = 0;
        for (std::uint32_t m = 0; m < states; ++m) {
            const auto pb = posterior(procedures[p], belief, tables, EvidentialState(belief.n(), m));
            pbs[m] = pb.value;
            if (pb.degenerate) ++degenerate;
        }
        record_run(true_joints, truth.prior(), pbs, degenerate, scheme_of(procedures[p]), out[p]);
    }
}

std::vector<RunStatistics> empty_stats(const std::vector<Procedure>& procedures) {
    std::vector<RunStatistics> stats;
    stats.reserve(procedures.size());
    for (const auto& p : procedures) stats.emplace_back(scheme_of(p));
    return stats;
}

std::string describe(const SliceKey& slice) {
    std::ostringstream s;
    s << "n=" << slice.n << " error_range=" << slice.error_range;
    if (slice.clamp) s << " clamp=[" << slice.clamp->lo << "," << slice.clamp->hi << "]";
    return s.str();
}

} // namespace

std::uint64_t derive_run_seed(std::uint64_t master, const SliceKey& slice, std::uint64_t run_index) {
    std::uint64_t h = mix64(master);
    h = mix64(h ^ static_cast<std::uint64_t>(slice.n));
    h = mix64(h ^ double_bits(slice.error_range));
    if (slice.clamp) {
        h = mix64(h ^ 0x636c616d70ULL);
        h = mix64(h ^ double_bits(slice.clamp->lo));
        h = mix64(h ^ double_bits(slice.clamp->hi));
    }
    return mix64(h ^ run_index);
}

std::vector<RunStatistics> evaluate_run(const ChainModel& true_model, const ChainModel& belief_model,
                                        const std::vector<Procedure>& procedures) {
    if (true_model.n() != belief_model.n()) throw std::invalid_argument("true and belief models differ in size");
    auto stats = empty_stats(procedures);
    std::vector<double> pbs;
    evaluate_into(true_model, joint_table(true_model), belief_model, procedures, pbs, stats);
    return stats;
}

std::vector<CellResult> run_slice(const ExperimentConfig& config, const SliceKey& slice,
                                  const std::vector<Procedure>& procedures, const RunOptions& options) {
    const std::uint64_t master = config.seed();
    const ErrorRange err(slice.error_range);
    const std::size_t runs = config.runs_per_cell;
    const std::size_t blocks = (runs + kBlockRuns - 1) / kBlockRuns;

    std::vector<std::vector<RunStatistics>> block_stats(blocks);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        std::vector<double> pbs;
        try {
            for (std::size_t b = next++; b < blocks; b = next++) {
                auto stats = empty_stats(procedures);
                const std::size_t end = std::min(runs, (b + 1) * kBlockRuns);
                for (std::size_t r = b * kBlockRuns; r < end; ++r) {
                    UniformSource u(derive_run_seed(master, slice, r));
                    const ChainModel truth = sample_true_model(slice.n, u);
                    ChainModel belief = perturb(truth, err, u);
                    if (slice.clamp) belief = clamp_parameters(belief, slice.clamp->lo, slice.clamp->hi);
                    evaluate_into(truth, joint_table(truth), belief, procedures, pbs, stats);
                }
                block_stats[b] = std::move(stats);
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = blocks;
        }
    };

    unsigned workers = options.workers ? options.workers : std::max(1U, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, blocks));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    auto totals = empty_stats(procedures);
    for (const auto& block : block_stats) {
        for (std::size_t p = 0; p < procedures.size(); ++p) totals[p] += block[p];
    }

    std::vector<CellResult> results;
    results.reserve(procedures.size());
    for (std::size_t p = 0; p < procedures.size(); ++p) {
        results.push_back(finish(CellId{procedures[p], slice.n, slice.error_range, slice.clamp}, totals[p]));
    }
    if (options.progress) options.progress("finished " + describe(slice) + " (" + std::to_string(runs) + " runs)");
    return results;
}

CellResult run_cell(const ExperimentConfig& config, const CellId& cell, const RunOptions& options) {
    validate_procedure(cell.procedure);
    return run_slice(config, cell.slice(), {cell.procedure}, options).front();
}

std::vector<CellResult> run_experiment(const ExperimentConfig& config, const RunOptions& options) {
    config.validate();
    const auto procedures = config.procedures();
    if (procedures.empty()) {
        if (options.progress) options.progress("warning: no procedures configured; nothing to run");
        return {};
    }
    const std::size_t counts = config.evidence_counts.size();
    const std::size_t ranges = config.error_ranges.size();
    std::vector<CellResult> ordered(procedures.size() * counts * ranges);
    for (std::size_t ni = 0; ni < counts; ++ni) {
        for (std::size_t ei = 0; ei < ranges; ++ei) {
            const SliceKey slice{config.evidence_counts[ni], config.error_ranges[ei], config.clamp};
            auto cells = run_slice(config, slice, procedures, options);
            for (std::size_t p = 0; p < cells.size(); ++p) {
                ordered[(p * counts + ni) * ranges + ei] = std::move(cells[p]);
            }
        }
    }
    return ordered;
}

} // namespace beliefsim
