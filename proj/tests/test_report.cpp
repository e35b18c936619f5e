#include <doctest.h>

#include <cmath>
#include <limits>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "beliefsim/config.hpp"
#include "beliefsim/experiment.hpp"
#include "beliefsim/reference_tables.hpp"
#include "beliefsim/report.hpp"

using namespace beliefsim;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("beliefsim_test_" + name);
    fs::remove_all(p);
    return p;
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

ResultSet small_t1(std::size_t runs) {
    const auto config = reproduce_config(TableId::T1, 5, runs);
    return ResultSet(run_experiment(config));
}

std::string rounded3(double v) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(3);
    s << v;
    return s.str();
}

} // namespace

TEST_SUITE("report") {

TEST_CASE("CSV quoting round-trips awkward fields") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    const std::vector<std::string> fields{"default:2.5", "a,b", "q\"q", ""};
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) line += (i ? "," : "") + csv_escape(fields[i]);
    CHECK(parse_csv_line(line) == fields);
    CHECK_THROWS_AS(parse_csv_line("\"open"), std::invalid_argument);
}

TEST_CASE("numbers use the shortest round-trip form") {
    CHECK(format_number(0.4) == "0.4");
    CHECK(format_number(2.0) == "2");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_number(std::nan("")) == "nan");
    const double awkward = 0.1 + 0.2;
    CHECK(std::stod(format_number(awkward)) == awkward);
}

TEST_CASE("table ids") {
    CHECK(parse_table_id("t3") == TableId::T3);
    CHECK(parse_table_id("T7") == TableId::T7);
    CHECK(table_name(TableId::T6) == "t6");
    CHECK_THROWS_AS(parse_table_id("t8"), std::invalid_argument);
}

TEST_CASE("write then read recovers every value exactly") {
    const auto dir = scratch("roundtrip");
    auto config = reproduce_config(TableId::T7, 3, 300);
    config.procedure_names.push_back("proper_bayes");
    const ResultSet original(run_experiment(config));
    write_results(dir.string(), original);

    const auto h = read_text(dir / "histograms.csv");
    CHECK(h.rfind("procedure,n,error_range,clamp,bin,mass_given_T,mass_given_F,lr\n", 0) == 0);
    CHECK(read_text(dir / "summary.csv").rfind("procedure,n,error_range,clamp,dprime,brier,degenerate_count\n", 0) ==
          0);

    const auto loaded = read_results(dir.string());
    REQUIRE(loaded.cells().size() == original.cells().size());
    for (std::size_t i = 0; i < loaded.cells().size(); ++i) {
        const auto& a = original.cells()[i];
        const auto& b = loaded.cells()[i];
        CHECK(a.procedure == b.procedure);
        CHECK(a.n == b.n);
        CHECK(a.error_range == b.error_range);
        CHECK(a.scheme == b.scheme);
        CHECK(a.hist_true == b.hist_true);
        CHECK(a.hist_false == b.hist_false);
        CHECK(a.dprime == b.dprime);
        CHECK(a.brier == b.brier);
        CHECK(a.degenerate_count == b.degenerate_count);
        for (std::size_t k = 0; k < a.lr.size(); ++k) {
            CHECK((a.lr[k] == b.lr[k] || (std::isnan(a.lr[k]) && std::isnan(b.lr[k]))));
        }
    }
    fs::remove_all(dir);
}

TEST_CASE("property: stored masses sum to one per cell and hypothesis") {
    const auto results = small_t1(400);
    for (const auto& c : results.cells()) {
        double t = 0.0;
        double f = 0.0;
        for (double v : c.hist_true) t += v;
        for (double v : c.hist_false) f += v;
        CHECK(std::abs(t - 1.0) < 1e-9);
        CHECK(std::abs(f - 1.0) < 1e-9);
    }
}

TEST_CASE("rendered tables carry every stored value at three decimals") {
    const auto results = small_t1(400);
    const auto text = render_table(TableId::T1, results);
    const auto rows = parse_rendered_table(text);
    REQUIRE(rows.size() == 10);
    const std::vector<std::pair<int, double>> columns{{4, 0.0}, {4, 0.4}, {4, 1.2}, {7, 0.0}, {7, 0.4}, {7, 1.2}};
    for (std::size_t r = 0; r < 9; ++r) {
        CHECK(rows[r].label == bin_labels(BinScheme::Continuous)[r]);
        REQUIRE(rows[r].values.size() == 6);
        for (std::size_t c = 0; c < 6; ++c) {
            const auto& cell = results.at("proper_bayes", columns[c].first, columns[c].second, false);
            CHECK(rounded3(rows[r].values[c]) == rounded3(cell.hist_true[r]));
        }
    }
    CHECK(rows[9].label == "d'");
    CHECK(rounded3(rows[9].values[5]) == rounded3(results.at("proper_bayes", 7, 1.2, false).dprime));
}

TEST_CASE("rendering a table with a missing cell fails") {
    auto records = small_t1(100).cells();
    records.pop_back();
    CHECK_THROWS_AS(render_table(TableId::T1, ResultSet(records)), MissingCellError);
}

TEST_CASE("cmd_run exit codes") {
    const auto dir = scratch("cmd_run");
    fs::create_directories(dir);
    std::ostringstream out;
    std::ostringstream err;

    SUBCASE("missing master_seed is a config error naming the key") {
        write_text(dir / "c.conf", "evidence_counts = 2\nerror_ranges = 0\nruns_per_cell = 10\n");
        CHECK(cmd_run((dir / "c.conf").string(), {}, 1, out, err) == 1);
        CHECK(err.str().find("master_seed") != std::string::npos);
    }
    SUBCASE("unknown key is a config error") {
        write_text(dir / "c.conf", "master_seed = 1\nbogus = 3\n");
        CHECK(cmd_run((dir / "c.conf").string(), {}, 1, out, err) == 1);
        CHECK(err.str().find("bogus") != std::string::npos);
    }
    SUBCASE("missing config file is an i/o error") {
        CHECK(cmd_run((dir / "absent.conf").string(), {}, 1, out, err) == 2);
    }
    SUBCASE("unwritable output directory is an i/o error") {
        write_text(dir / "blocker", "x");
        write_text(dir / "c.conf", "master_seed = 1\nevidence_counts = 2\nerror_ranges = 0\nruns_per_cell = 10\n"
                                   "procedures = proper_bayes\noutput_dir = " +
                                       (dir / "blocker" / "sub").string() + "\n");
        CHECK(cmd_run((dir / "c.conf").string(), {}, 1, out, err) == 2);
    }
    SUBCASE("overrides apply on top of the file") {
        const auto results_dir = dir / "out";
        write_text(dir / "c.conf", "master_seed = 1\nevidence_counts = 2\nerror_ranges = 0\nruns_per_cell = 500\n"
                                   "procedures = proper_bayes\noutput_dir = " +
                                       results_dir.string() + "\n");
        CHECK(cmd_run((dir / "c.conf").string(), {"runs_per_cell=10", "error_ranges=0,0.4"}, 2, out, err) == 0);
        const auto loaded = read_results(results_dir.string());
        CHECK(loaded.cells().size() == 2);
        CHECK(loaded.find("proper_bayes", 2, 0.4, false) != nullptr);

        std::ostringstream rep;
        CHECK(cmd_report(results_dir.string(), "t1", rep, err) == 1);
        CHECK(err.str().find("no results") != std::string::npos);
        CHECK(cmd_report(results_dir.string(), "t9", rep, err) == 1);
        CHECK(cmd_report((dir / "nowhere").string(), "t1", rep, err) == 2);
    }
    fs::remove_all(dir);
}

TEST_CASE("config parsing") {
    const auto c = parse_config("# c\nmaster_seed = 9\nevidence_counts = 4, 7\nclamp_lo = 0.1\nclamp_hi = 0.9\n",
                                {"procedures=proper_bayes,default:2.5"});
    CHECK(c.seed() == 9);
    CHECK(c.evidence_counts == std::vector<int>{4, 7});
    REQUIRE(c.clamp.has_value());
    CHECK(c.clamp->lo == 0.1);
    CHECK(c.procedures().size() == 2);
    CHECK(parse_config(format_config(c)).procedure_names == c.procedure_names);
    CHECK_THROWS_AS(parse_config("master_seed = 1\nevidence_counts = 13\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("master_seed = 1\nerror_ranges = 2.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("master_seed = 1\nruns_per_cell = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("master_seed = 1\nprocedures = nope\n"), ConfigError);
    try {
        parse_config("evidence_counts = 4\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "master_seed");
    }
}

}
