#include "beliefsim/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "beliefsim/reference_tables.hpp"

namespace beliefsim {

namespace fs = std::filesystem;

namespace {

constexpr double kRangeMatch = 1e-9;

const char* const kHistogramHeader = "procedure,n,error_range,clamp,bin,mass_given_T,mass_given_F,lr";
const char* const kSummaryHeader = "procedure,n,error_range,clamp,dprime,brier,degenerate_count";

double parse_double(const std::string& text) {
    double v = 0.0;
    const char* end = text.data() + text.size();
    auto res = std::from_chars(text.data(), end, v);
    if (text.empty() || res.ec != std::errc{} || res.ptr != end) {
        throw std::invalid_argument("malformed number '" + text + "'");
    }
    return v;
}

template <class T>
T parse_integer(const std::string& text) {
    T v{};
    const char* end = text.data() + text.size();
    auto res = std::from_chars(text.data(), end, v);
    if (text.empty() || res.ec != std::errc{} || res.ptr != end) {
        throw std::invalid_argument("malformed integer '" + text + "'");
    }
    return v;
}

std::string fixed3(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string fixed2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string count_word(int n) {
    static const char* const words[] = {"Zero", "One", "Two",   "Three", "Four",   "Five", "Six",
                                        "Seven", "Eight", "Nine", "Ten", "Eleven", "Twelve"};
    return n >= 0 && n <= 12 ? words[n] : std::to_string(n);
}

std::string cell_key(const std::string& procedure, int n, double err, bool clamped) {
    return procedure + "|" + std::to_string(n) + "|" + format_number(err) + "|" + (clamped ? "1" : "0");
}

// Column groups over a shared row-label column; every cell is 3-decimal.
struct Grid {
    std::string title;
    std::string corner;
    std::vector<std::pair<std::string, std::vector<std::string>>> groups;
    std::vector<RenderedRow> rows;
};

std::string render_grid(const Grid& g) {
    constexpr int kLabelWidth = 18;
    constexpr int kCellWidth = 9;
    constexpr int kGroupGap = 3;
    std::ostringstream out;
    out << g.title << "\n\n";

    std::ostringstream group_line;
    group_line << std::setw(kLabelWidth) << "";
    for (std::size_t gi = 0; gi < g.groups.size(); ++gi) {
        const int width = static_cast<int>(g.groups[gi].second.size()) * kCellWidth;
        if (gi) group_line << std::string(kGroupGap, ' ');
        group_line << std::left << std::setw(width) << ("  " + g.groups[gi].first) << std::right;
    }
    std::string gl = group_line.str();
    gl.erase(gl.find_last_not_of(' ') + 1);
    out << gl << '\n';

    out << std::left << std::setw(kLabelWidth) << g.corner << std::right;
    for (std::size_t gi = 0; gi < g.groups.size(); ++gi) {
        if (gi) out << std::string(kGroupGap, ' ');
        for (const auto& h : g.groups[gi].second) out << std::setw(kCellWidth) << h;
    }
    out << '\n';

    for (const auto& row : g.rows) {
        out << std::left << std::setw(kLabelWidth) << row.label << std::right;
        std::size_t col = 0;
        for (std::size_t gi = 0; gi < g.groups.size(); ++gi) {
            if (gi) out << std::string(kGroupGap, ' ');
            for (std::size_t c = 0; c < g.groups[gi].second.size(); ++c, ++col) {
                out << std::setw(kCellWidth) << fixed3(row.values.at(col));
            }
        }
        out << '\n';
    }
    return out.str();
}

std::string procedure_title(const std::string& label) {
    static const std::map<std::string, std::string> titles{
        {"proper_bayes", "Proper Bayes"},       {"simple_naive", "Simple Naive Bayes"},
        {"strong_naive", "Strong Naive Bayes"}, {"complex_linear", "Complex Linear"},
        {"simple_linear", "Simple Linear"},     {"strong_linear", "Strong Linear"},
        {"weighted_linear", "Weighted Linear"},
    };
    const auto it = titles.find(label);
    return it == titles.end() ? label : it->second;
}

std::string render_histogram_table(TableId id, const ResultSet& results) {
    const auto& ref = reference_histogram_table(id);
    Grid g;
    g.title = "Table " + std::to_string(static_cast<int>(id)) + ": Average probability of posterior belief values (H=T), " +
              procedure_title(ref.procedure) + (ref.clamped ? " with belief values clamped" : "");
    g.corner = "Posterior Belief";
    for (const auto& col : ref.columns) {
        const std::string group = count_word(col.n) + " Evidence Items";
        if (g.groups.empty() || g.groups.back().first != group) g.groups.push_back({group, {}});
        g.groups.back().second.push_back(fixed2(col.error_range));
    }
    const auto& labels = bin_labels(BinScheme::Continuous);
    std::vector<const CellRecord*> cells;
    for (const auto& col : ref.columns) cells.push_back(&results.at(ref.procedure, col.n, col.error_range, ref.clamped));
    for (std::size_t k = 0; k < kBinCount; ++k) {
        RenderedRow row{labels[k], {}};
        for (const auto* c : cells) row.values.push_back(c->hist_true.at(k));
        g.rows.push_back(std::move(row));
    }
    RenderedRow d{"d'", {}};
    for (const auto* c : cells) d.values.push_back(c->dprime);
    g.rows.push_back(std::move(d));
    return render_grid(g);
}

std::string render_ratio_table(const ResultSet& results) {
    Grid g;
    g.title = "Table 6: P(PB(H=T)|H=T) / P(PB(H=T)|H=F), four evidence nodes";
    g.corner = "Posterior Belief";
    std::vector<const CellRecord*> cells;
    for (double err : kRatioErrorRanges) {
        g.groups.push_back({"Error Range = " + fixed2(err).substr(0, 3), {"Bayes", "Naive", "StrLin"}});
        for (const char* proc : {"proper_bayes", "simple_naive", "strong_linear"}) {
            cells.push_back(&results.at(proc, 4, err, false));
        }
    }
    const auto& labels = bin_labels(BinScheme::Continuous);
    for (std::size_t k = 0; k < kBinCount; ++k) {
        RenderedRow row{labels[k], {}};
        for (const auto* c : cells) row.values.push_back(c->lr.at(k));
        g.rows.push_back(std::move(row));
    }
    return render_grid(g);
}

std::string render_atom_table(const ResultSet& results) {
    Grid g;
    g.title = "Table 7: Average probability of posterior belief values (H=T), default models, four evidence items";
    g.corner = "Posterior Belief";
    std::vector<const CellRecord*> cells;
    for (const auto& [proc, name] : {std::pair{"default:1.5", "3/2"}, std::pair{"default:2.5", "5/2"}}) {
        g.groups.push_back({std::string("Threshold = ") + name, {}});
        for (double err : kTableErrorRanges) {
            g.groups.back().second.push_back(fixed2(err));
            cells.push_back(&results.at(proc, 4, err, false));
        }
    }
    const auto& labels = bin_labels(BinScheme::Atoms);
    for (std::size_t k = 0; k < 3; ++k) {
        RenderedRow row{labels[k], {}};
        for (const auto* c : cells) row.values.push_back(c->hist_true.at(k));
        g.rows.push_back(std::move(row));
    }
    return render_grid(g);
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path, const std::string& header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument(path.string() + " is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) throw std::invalid_argument(path.string() + ": unexpected header '" + line + "'");
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(parse_csv_line(line));
    }
    return rows;
}

} // namespace

// ---------------------------------------------------------------------------
// CSV primitives

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> parse_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw std::invalid_argument("unterminated quoted CSV field");
    fields.push_back(std::move(cur));
    return fields;
}

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// ResultSet

CellRecord to_record(const CellResult& r) {
    CellRecord c;
    c.procedure = procedure_label(r.cell.procedure);
    c.n = r.cell.n;
    c.error_range = r.cell.error_range;
    c.clamped = r.cell.clamp.has_value();
    c.scheme = r.scheme;
    c.hist_true = r.hist_true;
    c.hist_false = r.hist_false;
    c.lr = r.lr;
    c.dprime = r.dprime;
    c.brier = r.brier;
    c.degenerate_count = r.degenerate_count;
    return c;
}

ResultSet::ResultSet(const std::vector<CellResult>& results) {
    cells_.reserve(results.size());
    for (const auto& r : results) cells_.push_back(to_record(r));
}

const CellRecord* ResultSet::find(const std::string& procedure, int n, double error_range, bool clamped) const {
    for (const auto& c : cells_) {
        if (c.procedure == procedure && c.n == n && c.clamped == clamped &&
            std::abs(c.error_range - error_range) < kRangeMatch) {
            return &c;
        }
    }
    return nullptr;
}

const CellRecord& ResultSet::at(const std::string& procedure, int n, double error_range, bool clamped) const {
    if (const auto* c = find(procedure, n, error_range, clamped)) return *c;
    throw MissingCellError("no results for procedure=" + procedure + " n=" + std::to_string(n) +
                           " error_range=" + format_number(error_range) + " clamp=" + (clamped ? "1" : "0"));
}

void write_histograms_csv(std::ostream& out, const ResultSet& results) {
    out << kHistogramHeader << '\n';
    for (const auto& c : results.cells()) {
        const auto& labels = bin_labels(c.scheme);
        for (std::size_t k = 0; k < c.hist_true.size(); ++k) {
            out << csv_escape(c.procedure) << ',' << c.n << ',' << format_number(c.error_range) << ','
                << (c.clamped ? 1 : 0) << ',' << csv_escape(labels[k]) << ',' << format_number(c.hist_true[k]) << ','
                << format_number(c.hist_false[k]) << ',' << format_number(c.lr[k]) << '\n';
        }
    }
}

void write_summary_csv(std::ostream& out, const ResultSet& results) {
    out << kSummaryHeader << '\n';
    for (const auto& c : results.cells()) {
        out << csv_escape(c.procedure) << ',' << c.n << ',' << format_number(c.error_range) << ','
            << (c.clamped ? 1 : 0) << ',' << format_number(c.dprime) << ',' << format_number(c.brier) << ','
            << c.degenerate_count << '\n';
    }
}

void write_results(const std::string& dir, const ResultSet& results) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir + "'");
    std::ostringstream hist;
    write_histograms_csv(hist, results);
    std::ostringstream summary;
    write_summary_csv(summary, results);
    write_file(fs::path(dir) / "histograms.csv", hist.str());
    write_file(fs::path(dir) / "summary.csv", summary.str());
}

ResultSet read_results(const std::string& dir) {
    const auto hist_rows = read_csv(fs::path(dir) / "histograms.csv", kHistogramHeader);
    const auto summary_rows = read_csv(fs::path(dir) / "summary.csv", kSummaryHeader);

    std::vector<CellRecord> cells;
    std::map<std::string, std::size_t> index;
    const auto& atoms = bin_labels(BinScheme::Atoms);
    for (const auto& row : hist_rows) {
        if (row.size() != 8) throw std::invalid_argument("histograms.csv: expected 8 fields");
        const int n = parse_integer<int>(row[1]);
        const double err = parse_double(row[2]);
        const bool clamped = parse_integer<int>(row[3]) != 0;
        const std::string key = cell_key(row[0], n, err, clamped);
        auto [it, inserted] = index.try_emplace(key, cells.size());
        if (inserted) {
            CellRecord c;
            c.procedure = row[0];
            c.n = n;
            c.error_range = err;
            c.clamped = clamped;
            c.scheme = std::find(atoms.begin(), atoms.end(), row[4]) != atoms.end() ? BinScheme::Atoms
                                                                                   : BinScheme::Continuous;
            cells.push_back(std::move(c));
        }
        auto& c = cells[it->second];
        const auto& labels = bin_labels(c.scheme);
        if (c.hist_true.size() >= labels.size() || labels[c.hist_true.size()] != row[4]) {
            throw std::invalid_argument("histograms.csv: unexpected bin '" + row[4] + "' for " + row[0]);
        }
        c.hist_true.push_back(parse_double(row[5]));
        c.hist_false.push_back(parse_double(row[6]));
        c.lr.push_back(parse_double(row[7]));
    }
    for (const auto& row : summary_rows) {
        if (row.size() != 7) throw std::invalid_argument("summary.csv: expected 7 fields");
        const std::string key =
            cell_key(row[0], parse_integer<int>(row[1]), parse_double(row[2]), parse_integer<int>(row[3]) != 0);
        const auto it = index.find(key);
        if (it == index.end()) throw std::invalid_argument("summary.csv: cell without histogram rows: " + key);
        auto& c = cells[it->second];
        c.dprime = parse_double(row[4]);
        c.brier = parse_double(row[5]);
        c.degenerate_count = parse_integer<std::size_t>(row[6]);
    }
    for (const auto& c : cells) {
        if (c.hist_true.size() != bin_count(c.scheme)) {
            throw std::invalid_argument("histograms.csv: incomplete bins for " + c.procedure);
        }
    }
    return ResultSet(std::move(cells));
}

// ---------------------------------------------------------------------------
// Tables

TableId parse_table_id(const std::string& text) {
    if (text.size() == 2 && (text[0] == 't' || text[0] == 'T') && text[1] >= '1' && text[1] <= '7') {
        return static_cast<TableId>(text[1] - '0');
    }
    throw std::invalid_argument("unknown table '" + text + "' (expected t1..t7)");
}

std::string table_name(TableId id) { return "t" + std::to_string(static_cast<int>(id)); }

std::string render_table(TableId id, const ResultSet& results) {
    switch (id) {
    case TableId::T6: return render_ratio_table(results);
    case TableId::T7: return render_atom_table(results);
    default: return render_histogram_table(id, results);
    }
}

std::vector<RenderedRow> parse_rendered_table(const std::string& text) {
    const auto& continuous = bin_labels(BinScheme::Continuous);
    const auto& atoms = bin_labels(BinScheme::Atoms);
    auto is_label = [&](const std::string& t) {
        return t == "d'" || std::find(continuous.begin(), continuous.end(), t) != continuous.end() ||
               std::find(atoms.begin(), atoms.end(), t) != atoms.end();
    };
    std::vector<RenderedRow> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream tokens(line);
        std::string label;
        if (!(tokens >> label) || !is_label(label)) continue;
        RenderedRow row{label, {}};
        std::string tok;
        while (tokens >> tok) row.values.push_back(parse_double(tok));
        if (row.values.empty()) continue;
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides, unsigned workers,
            std::ostream& out, std::ostream& err) {
    ExperimentConfig config;
    try {
        config = load_config(config_path, overrides);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 1;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return 2;
    }
    RunOptions options;
    options.workers = workers;
    options.progress = [&err](const std::string& msg) { err << msg << '\n'; };
    try {
        const auto results = run_experiment(config, options);
        write_results(config.output_dir, ResultSet(results));
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 1;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return 2;
    }
    out << "wrote " << (fs::path(config.output_dir) / "histograms.csv").string() << " and "
        << (fs::path(config.output_dir) / "summary.csv").string() << '\n';
    return 0;
}

int cmd_report(const std::string& dir, const std::string& table, std::ostream& out, std::ostream& err) {
    try {
        const TableId id = parse_table_id(table);
        const auto results = read_results(dir);
        out << render_table(id, results);
        return 0;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

int cmd_reproduce(const std::string& table, const ReproduceOptions& options, std::ostream& out, std::ostream& err) {
    TableId id{};
    try {
        id = parse_table_id(table);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    ExperimentConfig config = reproduce_config(id, options.seed, options.runs);
    if (!options.dir.empty()) config.output_dir = options.dir;
    if (options.runs < kReferenceRuns) {
        err << "warning: " << options.runs << " runs per cell is below " << kReferenceRuns
            << "; reference tolerances may not be met at this sample size\n";
    }
    RunOptions run_options;
    run_options.workers = options.workers;
    run_options.progress = [&err](const std::string& msg) { err << msg << '\n'; };

    ResultSet results;
    try {
        config.validate();
        results = ResultSet(run_experiment(config, run_options));
        write_results(config.output_dir, results);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 1;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return 2;
    }

    out << render_table(id, results) << '\n';
    const auto checks = check_table(id, results);
    std::size_t passed = 0;
    for (const auto& c : checks) {
        if (c.passed) ++passed;
        out << (c.passed ? "PASS " : "FAIL ") << c.name << "  observed=" << fixed3(c.observed)
            << " expected=" << fixed3(c.expected);
        if (c.kind == "abs") out << " |delta|=" << fixed3(std::abs(c.observed - c.expected)) << " tol=" << c.tolerance;
        if (c.kind == "rel") {
            out << " rel=" << fixed3(std::abs(c.observed - c.expected) / std::abs(c.expected)) << " tol=" << c.tolerance;
        }
        out << '\n';
    }
    out << passed << "/" << checks.size() << " checks passed\n";
    return passed == checks.size() ? 0 : 3;
}

} // namespace beliefsim
