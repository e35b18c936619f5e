#pragma once

// CSV persistence and plain-text table rendering.
//
// histograms.csv  procedure,n,error_range,clamp,bin,mass_given_T,mass_given_F,lr
// summary.csv     procedure,n,error_range,clamp,dprime,brier,degenerate_count
//
// One histograms row per bin per cell. Numbers are written in shortest
// round-trip form, so reruns with the same config are byte-identical and a
// reload recovers every double exactly. `lr` is "inf" for x/0 and "nan" for
// 0/0. `clamp` is 0 or 1.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "beliefsim/experiment.hpp"
#include "beliefsim/metrics.hpp"

namespace beliefsim {

class MissingCellError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// RFC-4180 style field quoting and line splitting.
std::string csv_escape(const std::string& field);
std::vector<std::string> parse_csv_line(const std::string& line);

/// Shortest round-trip decimal form ("0.4", "inf", "nan").
std::string format_number(double v);

/// One cell as stored on disk.
struct CellRecord {
    std::string procedure;
    int n = 0;
    double error_range = 0.0;
    bool clamped = false;
    BinScheme scheme = BinScheme::Continuous;
    std::vector<double> hist_true;
    std::vector<double> hist_false;
    std::vector<double> lr;
    double dprime = 0.0;
    double brier = 0.0;
    std::size_t degenerate_count = 0;
};

CellRecord to_record(const CellResult& result);

class ResultSet {
public:
    ResultSet() = default;
    explicit ResultSet(std::vector<CellRecord> cells) : cells_(std::move(cells)) {}
    explicit ResultSet(const std::vector<CellResult>& results);

    const std::vector<CellRecord>& cells() const noexcept { return cells_; }

    const CellRecord* find(const std::string& procedure, int n, double error_range, bool clamped) const;

    /// Like find() but throws MissingCellError.
    const CellRecord& at(const std::string& procedure, int n, double error_range, bool clamped) const;

private:
    std::vector<CellRecord> cells_;
};

void write_histograms_csv(std::ostream& out, const ResultSet& results);
void write_summary_csv(std::ostream& out, const ResultSet& results);

/// Writes both CSVs into `dir`, creating it if needed. Throws IoError.
void write_results(const std::string& dir, const ResultSet& results);

/// Reads both CSVs back. Throws IoError on missing/unreadable files and
/// std::invalid_argument on malformed content.
ResultSet read_results(const std::string& dir);

enum class TableId { T1 = 1, T2, T3, T4, T5, T6, T7 };

/// "t1".."t7"; throws std::invalid_argument otherwise.
TableId parse_table_id(const std::string& text);
std::string table_name(TableId id);

/// Aligned three-decimal text rendering of one published table layout.
/// Throws MissingCellError if a needed cell is absent.
std::string render_table(TableId id, const ResultSet& results);

/// Numeric rows recovered from render_table output.
struct RenderedRow {
    std::string label;
    std::vector<double> values;
};
std::vector<RenderedRow> parse_rendered_table(const std::string& text);

// ---------------------------------------------------------------------------
// Command entry points (exit status: 0 ok, 1 config/data error, 2 I/O error)

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides, unsigned workers,
            std::ostream& out, std::ostream& err);

int cmd_report(const std::string& dir, const std::string& table, std::ostream& out, std::ostream& err);

struct ReproduceOptions {
    std::uint64_t seed = 1991;
    std::size_t runs = 20000;
    std::string dir;  // empty: "reproduce_<table>"
    unsigned workers = 0;
};

/// Runs the cells behind a table, writes the CSVs, renders the table, and
/// checks it against the reference values. Returns 0 only if every check
/// passes; 3 when a check fails.
int cmd_reproduce(const std::string& table, const ReproduceOptions& options, std::ostream& out, std::ostream& err);

} // namespace beliefsim
