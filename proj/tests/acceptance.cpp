// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
// Usage: acceptance [criterion ...]   (no arguments runs everything)

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "beliefsim/chain_model.hpp"
#include "beliefsim/experiment.hpp"
#include "beliefsim/inference.hpp"
#include "beliefsim/metrics.hpp"
#include "beliefsim/reference_tables.hpp"
#include "beliefsim/report.hpp"
#include "oracle.hpp"

using namespace beliefsim;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 1991;
constexpr double kBrierChance = 0.25;
constexpr double kDependencyGain = 0.2;
constexpr double kIndependenceDrift = 0.1;
constexpr double kExactTolerance = 1e-12;
constexpr double kFiveDecimals = 5e-6;
constexpr int kOracleModels = 1000;
constexpr double kSweepBudgetSeconds = 300.0;

struct Outcome {
    bool passed = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            passed = false;
            notes.push_back(what);
        }
    }
};

std::string fmt(double v, int digits = 3) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

std::string sci(double v) {
    std::ostringstream s;
    s << std::scientific << std::setprecision(2) << v;
    return s.str();
}

std::map<TableId, ResultSet> g_tables;

const ResultSet& table_results(TableId id) {
    auto it = g_tables.find(id);
    if (it == g_tables.end()) {
        const auto config = reproduce_config(id, kSeed, kReferenceRuns);
        it = g_tables.emplace(id, ResultSet(run_experiment(config))).first;
    }
    return it->second;
}

Outcome table_checks(TableId id) {
    Outcome o;
    std::size_t ok = 0;
    const auto checks = check_table(id, table_results(id));
    for (const auto& c : checks) {
        if (c.passed) {
            ++ok;
        } else {
            o.require(false, c.name + " observed=" + fmt(c.observed) + " expected=" + fmt(c.expected));
        }
    }
    o.notes.insert(o.notes.begin(), std::to_string(ok) + "/" + std::to_string(checks.size()) + " table checks");
    return o;
}

bool on_linear_grid(double pb, int n) {
    const int items = n + 1;
    const long k = std::lround(pb * items);
    return pb == static_cast<double>(k) / static_cast<double>(items);
}

// ---------------------------------------------------------------------------

Outcome criterion1() { return table_checks(TableId::T1); }

Outcome criterion2() {
    Outcome o = table_checks(TableId::T2);
    auto config = reproduce_config(TableId::T2, kSeed, kReferenceRuns);
    config.clamp = ClampBounds{0.10, 0.90};
    const auto alt = ResultSet(run_experiment(config));
    std::string top = "info: clamp [.10,.90] top-bin masses";
    for (double err : kTableErrorRanges) top += " " + fmt(alt.at("proper_bayes", 4, err, true).hist_true[8]);
    o.notes.push_back(top + " (reference .414 .387 .249)");
    return o;
}

Outcome criterion3() { return table_checks(TableId::T3); }

Outcome criterion4() {
    Outcome o = table_checks(TableId::T4);
    const Outcome t5 = table_checks(TableId::T5);
    o.passed = o.passed && t5.passed;
    o.notes.insert(o.notes.end(), t5.notes.begin(), t5.notes.end());

    // Every emitted linear PB sits exactly on the k/(n+1) grid.
    std::size_t emitted = 0;
    std::size_t off_grid = 0;
    for (int n : {4, 7}) {
        for (double err : kTableErrorRanges) {
            for (std::uint64_t run = 0; run < 500; ++run) {
                UniformSource u(derive_run_seed(kSeed, {n, err, std::nullopt}, run));
                const auto truth = sample_true_model(n, u);
                const auto belief = perturb(truth, ErrorRange(err), u);
                const auto tables = tabulate(belief);
                for (const auto& e : all_states(n)) {
                    for (const Procedure& p : {Procedure{ComplexLinear{}}, Procedure{SimpleLinear{}}}) {
                        ++emitted;
                        if (!on_linear_grid(posterior(p, belief, tables, e).value, n)) ++off_grid;
                    }
                }
            }
        }
    }
    o.require(off_grid == 0, std::to_string(off_grid) + " linear PBs off the k/(n+1) grid");
    o.notes.push_back(std::to_string(emitted) + " linear PBs checked on the k/(n+1) grid");
    return o;
}

Outcome criterion5() { return table_checks(TableId::T6); }

Outcome criterion6() { return table_checks(TableId::T7); }

Outcome criterion7() {
    Outcome o;
    ExperimentConfig config;
    config.master_seed = kSeed;
    config.runs_per_cell = kReferenceRuns;
    config.evidence_counts = {4, 7};
    config.error_ranges = {0.0, 1.2, 1.4, 1.6, 1.8, 2.0};
    config.procedure_names = {"proper_bayes", "simple_naive", "strong_naive"};
    const ResultSet results(run_experiment(config));
    for (int n : {4, 7}) {
        for (double err : config.error_ranges) {
            const double b = results.at("proper_bayes", n, err, false).brier;
            if (err == 0.0) {
                o.require(b <= kBrierChance, "proper_bayes n=" + std::to_string(n) + " err=0 brier " + fmt(b, 4));
            } else {
                o.require(b > kBrierChance,
                          "proper_bayes n=" + std::to_string(n) + " err=" + fmt(err, 1) + " brier " + fmt(b, 4));
            }
        }
        std::string line = "proper_bayes n=" + std::to_string(n) + " brier";
        for (double err : config.error_ranges) line += " " + fmt(results.at("proper_bayes", n, err, false).brier, 4);
        o.notes.push_back(line);
        line = "info: simple_naive n=" + std::to_string(n) + " brier";
        for (double err : config.error_ranges) line += " " + fmt(results.at("simple_naive", n, err, false).brier, 4);
        o.notes.push_back(line);
    }
    const auto m0 = ChainModel(2, 0.8, {0.7, 0.4, 0.9, 0.5, 0.2, 0.6});
    o.require(std::abs(brier(m0, std::vector<double>(4, 0.5)) - kBrierChance) < kExactTolerance,
              "constant 0.5 does not score 0.25");
    return o;
}

Outcome criterion8() {
    Outcome o;
    UniformSource u(kSeed);
    double worst_posterior = 0.0;
    double worst_marginal = 0.0;
    for (int n = 1; n <= 7; ++n) {
        for (int k = 0; k < kOracleModels; ++k) {
            const auto truth = sample_true_model(n, u);
            const auto belief = perturb(truth, ErrorRange(0.0), u);
            const oracle::Model ref{n, std::vector<double>(truth.parameters().begin(), truth.parameters().end())};
            const auto tables = tabulate(belief);
            for (const auto& e : all_states(n)) {
                const double pb = posterior(ProperBayes{}, belief, tables, e).value;
                worst_posterior =
                    std::max(worst_posterior, std::abs(pb - ref.posterior(oracle::tuple_from_mask(n, e.mask()))));
            }
            for (int i = 0; i < n; ++i) {
                for (bool v : {true, false}) {
                    for (bool h : {true, false}) {
                        const double lib = tables.marginals.likelihood(i, v, h ? Hypothesis::True : Hypothesis::False);
                        worst_marginal = std::max(worst_marginal, std::abs(lib - ref.marginal(i, v, h)));
                    }
                }
            }
        }
    }
    o.require(worst_posterior <= kExactTolerance, "posterior drift " + sci(worst_posterior));
    o.require(worst_marginal <= kExactTolerance, "marginal drift " + sci(worst_marginal));
    o.notes.push_back("max |PB - oracle posterior| " + sci(worst_posterior) + " over " +
                      std::to_string(7 * kOracleModels) + " models");
    o.notes.push_back("max |marginal - oracle| " + sci(worst_marginal));

    // Worked examples on the two-node fixture, each against the oracle.
    const ChainModel m0(2, 0.8, {0.7, 0.4, 0.9, 0.5, 0.2, 0.6});
    const auto ref = oracle::m0();
    int examples = 0;
    auto agree = [&](const std::string& what, double lib, double expected) {
        ++examples;
        o.require(std::abs(lib - expected) < kFiveDecimals,
                  what + " library " + fmt(lib, 6) + " oracle " + fmt(expected, 6));
    };
    agree("joint(T,(T,T))", joint(m0, Hypothesis::True, {true, true}), ref.joint(true, {true, true}));
    agree("joint(F,(F,F))", joint(m0, Hypothesis::False, {false, false}), ref.joint(false, {false, false}));
    agree("P(B=T|T)", marginal_likelihood(m0, 1, true, Hypothesis::True), ref.marginal(1, true, true));
    agree("P(B=T|F)", marginal_likelihood(m0, 1, true, Hypothesis::False), ref.marginal(1, true, false));
    for (const auto& e : all_states(2)) {
        const auto t = oracle::tuple_from_mask(2, e.mask());
        const std::string s = "(" + e.to_string() + ")";
        agree("posterior" + s, posterior_true(m0, e).value, ref.posterior(t));
        agree("P(e|T)" + s, evidence_prob_given_h(m0, e, Hypothesis::True).value, ref.p_e_given_h(t, true));
        agree("naive" + s, naive_bayes(m0, e).value, ref.naive(t));
        agree("strong_naive" + s, posterior(StrongNaive{}, m0, e).value, ref.naive(t, 2.0 / 3.0, 1.5));
        agree("complex_linear" + s, posterior(ComplexLinear{}, m0, e).value, ref.linear(t, 0));
        agree("simple_linear" + s, posterior(SimpleLinear{}, m0, e).value, ref.linear(t, 1));
        agree("strong_linear" + s, posterior(StrongLinear{}, m0, e).value, ref.linear(t, 2));
        agree("weighted_linear" + s, posterior(WeightedLinear{}, m0, e).value, ref.linear(t, 3));
        agree("default:1.5" + s, posterior(DefaultRule{1.5}, m0, e).value, ref.default_rule(t, 1.5));
        agree("default:2.5" + s, posterior(DefaultRule{2.5}, m0, e).value, ref.default_rule(t, 2.5));
    }
    std::vector<double> pbs;
    for (const auto& e : all_states(2)) pbs.push_back(posterior_true(m0, e).value);
    const auto ev = oracle::evaluate(ref, [&](const oracle::Tuple& t) { return pbs[oracle::mask_from_tuple(t)]; });
    const auto acc = accumulate(m0, pbs);
    agree("mean PB|T", acc.given_true.mean, ev.mean_true);
    agree("mean PB|F", acc.given_false.mean, ev.mean_false);
    agree("brier", brier(m0, pbs), ev.brier);
    agree("dprime", dprime(acc.given_true, acc.given_false),
          (ev.mean_true - ev.mean_false) / std::sqrt(ev.var_true + ev.var_false));
    for (std::size_t k = 0; k < kBinCount; ++k) {
        agree("bin " + std::to_string(k) + "|T", acc.hist_true[k], ev.hist_true[k]);
        agree("bin " + std::to_string(k) + "|F", acc.hist_false[k], ev.hist_false[k]);
    }
    o.notes.push_back(std::to_string(examples) + " fixture examples agree with the oracle to 5 decimals");
    return o;
}

Outcome criterion9() {
    Outcome o;
    struct Source {
        TableId table;
        const char* procedure;
        bool dependency_aware;
    };
    const Source sources[] = {{TableId::T1, "proper_bayes", true},
                              {TableId::T4, "complex_linear", true},
                              {TableId::T3, "simple_naive", false},
                              {TableId::T5, "simple_linear", false}};
    for (const auto& s : sources) {
        const auto& r = table_results(s.table);
        const double d4 = r.at(s.procedure, 4, 0.0, false).dprime;
        const double d7 = r.at(s.procedure, 7, 0.0, false).dprime;
        const double delta = d7 - d4;
        const bool ok = s.dependency_aware ? delta > kDependencyGain : std::abs(delta) < kIndependenceDrift;
        o.require(ok, std::string(s.procedure) + " delta " + fmt(delta));
        o.notes.push_back(std::string(s.procedure) + " d' " + fmt(d4) + " -> " + fmt(d7) + " (delta " + fmt(delta) +
                          ")");
    }
    return o;
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome criterion10() {
    Outcome o;
    const auto root = fs::temp_directory_path() / "beliefsim_acceptance_determinism";
    fs::remove_all(root);
    const std::vector<std::pair<std::string, unsigned>> runs{{"a", 0}, {"b", 0}, {"one_worker", 1}, {"five", 5}};
    for (const auto& [name, workers] : runs) {
        ReproduceOptions opts;
        opts.seed = 42;
        opts.dir = (root / name).string();
        opts.workers = workers;
        std::ostringstream out;
        std::ostringstream err;
        const int rc = cmd_reproduce("t1", opts, out, err);
        o.require(rc == 0 || rc == 3, "reproduce exited " + std::to_string(rc));
    }
    for (const char* file : {"histograms.csv", "summary.csv"}) {
        const auto first = read_bytes(root / "a" / file);
        o.require(!first.empty(), std::string(file) + " is empty");
        o.require(first == read_bytes(root / "b" / file), std::string(file) + " differs between executions");
        o.require(first == read_bytes(root / "one_worker" / file), std::string(file) + " differs with 1 worker");
        o.require(first == read_bytes(root / "five" / file), std::string(file) + " differs with 5 workers");
    }
    o.notes.push_back("t1 seed 42: two executions and 1/5/default workers byte-identical");
    fs::remove_all(root);
    return o;
}

Outcome sweep_budget() {
    Outcome o;
    ExperimentConfig config;
    config.master_seed = kSeed;
    const auto start = std::chrono::steady_clock::now();
    const auto results = run_experiment(config);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(seconds < kSweepBudgetSeconds, "took " + fmt(seconds, 1) + " s");
    o.notes.push_back(std::to_string(results.size()) + " cells x " + std::to_string(config.runs_per_cell) +
                      " runs in " + fmt(seconds, 1) + " s");
    return o;
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1", criterion1},   {"2", criterion2},  {"3", criterion3}, {"4", criterion4},
        {"5", criterion5},   {"6", criterion6},  {"7", criterion7}, {"8", criterion8},
        {"9", criterion9},   {"10", criterion10}, {"sweep", sweep_budget}};
    const std::map<std::string, std::string> titles{
        {"1", "Proper Bayes histograms and d' (t1)"},
        {"2", "clamped [.05,.95] Proper Bayes histograms, d' and U-shape (t2)"},
        {"3", "Simple/Strong Naive histograms and d' (t3)"},
        {"4", "Complex/Simple Linear histograms, d', structural zeros, k/(n+1) grid (t4, t5)"},
        {"5", "likelihood ratios and calibration bound (t6)"},
        {"6", "default-rule atoms and threshold ordering (t7)"},
        {"7", "Brier above chance for error >= 1.2, at most chance at 0"},
        {"8", "exact agreement with the enumeration oracle"},
        {"9", "d' gain from n=4 to n=7 with and without dependencies"},
        {"10", "byte-identical CSVs across executions and worker counts"},
        {"sweep", "full default sweep within 5 minutes"}};

    std::set<std::string> selected(argv + 1, argv + argc);
    int failures = 0;
    for (const auto& [id, fn] : criteria) {
        if (!selected.empty() && !selected.count(id)) continue;
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << id << ": " << titles.at(id) << '\n';
        for (const auto& note : o.notes) std::cout << "     " << note << '\n';
        std::cout.flush();
        if (!o.passed) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
