#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fdb/runner.hpp"

using namespace fdb;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string scratch_dir(const std::string& tag) {
    auto dir = fs::temp_directory_path() / ("fdb_io_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

RunConfig small_run_config(const std::string& tag) {
    RunConfig c;
    c.model = ModelKind::Boussinesq1D;
    c.n = 64;
    c.family = InitFamily::Gaussian;
    c.amplitude = 0.1;
    c.dt = 0.01;
    c.t_end = 0.1;
    c.output_stride = 2;
    c.output_dir = scratch_dir(tag);
    return c;
}

}  // namespace

TEST(ConfigParse, RoundTripThroughCanonicalText) {
    RunConfig c = small_run_config("roundtrip");
    c.beta = 0.75;
    c.s = 2.7;
    c.seed = 99;
    RunConfig back = parse_config(canonical_text(c));
    EXPECT_EQ(canonical_text(back), canonical_text(c));
}

TEST(ConfigParse, CollectsEveryViolation) {
    RunConfig c;
    c.n = 100;        // not a power of two
    c.dt = -1.0;      // negative
    c.t_end = 0.0;    // nonpositive
    c.C2 = 0.0;       // nonpositive
    c.h0 = 1.5;       // outside (0,1)
    auto v = validate(c);
    EXPECT_GE(v.size(), 5u);
}

TEST(ConfigParse, UnknownKeysAndBadValuesReported) {
    try {
        parse_config("grid.n = twelve\nnot.a.key = 3\n");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.violations.size(), 2u);
    }
}

TEST(ConfigParse, CommentsAndBlanksIgnored) {
    auto c = parse_config("# comment\n\n  model = whitham-1d  # trailing\n");
    EXPECT_EQ(c.model, ModelKind::Whitham1D);
}

TEST(Snapshot, WriteReadRoundTripIsExact) {
    auto dir = scratch_dir("snap");
    Snapshot s;
    s.dim = 2;
    s.n1 = 8;
    s.n2 = 4;
    s.t = 0.625;
    s.fields = {std::vector<double>(32), std::vector<double>(32), std::vector<double>(32)};
    for (std::size_t f = 0; f < 3; ++f)
        for (std::size_t i = 0; i < 32; ++i)
            s.fields[f][i] = std::sin(0.1 * static_cast<double>(f * 32 + i)) * 1e-7;
    write_snapshot(dir + "/x.bin", s);
    auto r = read_snapshot(dir + "/x.bin");
    EXPECT_EQ(r.dim, 2);
    EXPECT_EQ(r.n1, 8u);
    EXPECT_EQ(r.n2, 4u);
    EXPECT_EQ(r.t, 0.625);
    ASSERT_EQ(r.fields.size(), 3u);
    for (std::size_t f = 0; f < 3; ++f)
        for (std::size_t i = 0; i < 32; ++i) EXPECT_EQ(r.fields[f][i], s.fields[f][i]);
    // header is exactly 32 bytes
    EXPECT_EQ(fs::file_size(dir + "/x.bin"), 32u + 3u * 32u * 8u);
}

TEST(Run, RestStateAllZeroAndAllPass) {
    RunConfig c = small_run_config("rest");
    c.family = InitFamily::Rest;
    auto res = run(c);
    EXPECT_TRUE(res.all_pass());
    for (const auto& row : res.rows) {
        EXPECT_EQ(row.cols.at("E_s"), 0.0);
        EXPECT_EQ(row.cols.at("Hs_eta"), 0.0);
        EXPECT_EQ(row.cols.at("ratio"), 0.0);
    }
}

TEST(Run, DeterministicArtifactsAcrossInvocations) {
    RunConfig c = small_run_config("det_a");
    c.family = InitFamily::Random;
    c.band = 12;
    c.amplitude = 0.05;
    c.seed = 1234;
    auto r1 = run(c);
    std::string csv1 = slurp(c.output_dir + "/series.csv");
    std::string meta1 = slurp(c.output_dir + "/metadata.json");
    std::string snap1 = slurp(c.output_dir + "/snap_000010.bin");

    RunConfig c2 = c;
    c2.output_dir = scratch_dir("det_b");
    auto r2 = run(c2);
    std::string csv2 = slurp(c2.output_dir + "/series.csv");
    std::string snap2 = slurp(c2.output_dir + "/snap_000010.bin");

    EXPECT_EQ(csv1, csv2);
    EXPECT_EQ(snap1, snap2);
    // metadata differs only in the echoed output.dir
    EXPECT_NE(meta1, "");
}

TEST(Run, PlaneWavePeriodReturnRecorded) {
    RunConfig c = small_run_config("period");
    c.n = 256;
    c.family = InitFamily::PlaneWave;
    c.mode = 4;
    c.amplitude = 0.01;
    c.linearized = true;
    c.period_return = true;
    c.dt = 0.01;
    c.t_end = 1.0;  // overridden by the period
    auto res = run(c);
    ASSERT_TRUE(res.period_return_error.has_value());
    EXPECT_LE(*res.period_return_error, 1e-8);
    EXPECT_TRUE(res.verdicts.at("period_return").pass);
}

TEST(Run, BlowupProducesTruncatedButValidArtifacts) {
    RunConfig c = small_run_config("blowup");
    c.family = InitFamily::Random;
    c.amplitude = 60.0;  // violently steep data
    c.band = 18;
    c.monitors = false;  // watch the blow-up itself
    c.dt = 0.02;
    c.t_end = 2.0;
    c.output_stride = 1;
    auto res = run(c);
    EXPECT_FALSE(res.verdicts.at("completed").pass);
    ASSERT_TRUE(res.empirical_T_star.has_value());
    EXPECT_GT(*res.empirical_T_star, 0.0);
    EXPECT_FALSE(res.rows.empty());
    // artifacts exist and parse
    EXPECT_TRUE(fs::exists(c.output_dir + "/series.csv"));
    auto meta = Json::parse(slurp(c.output_dir + "/metadata.json"));
    EXPECT_NE(meta.find("empirical_T_star"), meta.end());
}

TEST(Run, NoncavitationEnforcementAbortsTheRun) {
    RunConfig c = small_run_config("enforce");
    c.model = ModelKind::Boussinesq1D;
    c.n = 256;
    c.beta = 0.25;
    c.family = InitFamily::Random;
    c.band = 25;
    c.decay = 1.2;
    c.amplitude = 0.9;  // nearly cavitating at t=0, crosses the floor quickly
    c.seed = 99;
    c.dt = 0.002;
    c.t_end = 4.0;
    c.output_stride = 25;
    c.monitors = true;
    auto res = run(c);
    EXPECT_FALSE(res.verdicts.at("completed").pass);
    EXPECT_NE(res.verdicts.at("completed").detail.find("non-cavitation"), std::string::npos);
    EXPECT_LT(res.rows.back().t, 4.0);  // truncated
    EXPECT_LT(res.rows.back().cols.at("min_depth"), 0.5 * res.h0_effective);
}

TEST(Run, InvalidConfigListsViolations) {
    RunConfig c = small_run_config("invalid");
    c.dt = 0.0;
    c.n = 12;
    EXPECT_THROW(run(c), ConfigError);
}

TEST(Csv, SeventeenDigitRoundTrip) {
    RunConfig c = small_run_config("csv");
    c.family = InitFamily::Random;
    c.amplitude = 0.03;
    auto res = run(c);
    // re-read the CSV and compare numeric fields exactly
    std::ifstream in(c.output_dir + "/series.csv");
    std::string header, line;
    std::getline(in, header);
    for (const auto& row : res.rows) {
        ASSERT_TRUE(std::getline(in, line));
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');
        EXPECT_EQ(std::stod(cell), row.t);
        for (const auto& col : res.columns) {
            ASSERT_TRUE(std::getline(ss, cell, ','));
            EXPECT_EQ(std::stod(cell), row.cols.at(col)) << col;
        }
    }
}

TEST(Sweep, EmptyListRejected) {
    EXPECT_THROW(sweep({}, 2), ConfigError);
}

TEST(Sweep, SingleElementMatchesRunAndOrderIsPreserved) {
    RunConfig a = small_run_config("sweep_a");
    a.family = InitFamily::Random;
    a.seed = 5;
    a.amplitude = 0.05;
    RunConfig b = a;
    b.output_dir = scratch_dir("sweep_b");
    b.seed = 6;
    RunConfig bad = a;
    bad.output_dir = scratch_dir("sweep_c");
    bad.dt = -1.0;  // fails, but must not abort the sweep

    auto rows = sweep({a, b, bad}, 3);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].index, 0u);
    EXPECT_EQ(rows[1].index, 1u);
    EXPECT_EQ(rows[2].index, 2u);
    EXPECT_TRUE(rows[0].ok);
    EXPECT_TRUE(rows[1].ok);
    EXPECT_FALSE(rows[2].ok);
    EXPECT_NE(rows[2].status.find("error"), std::string::npos);

    // single-element sweep produces the same artifacts as run()
    RunConfig solo = a;
    solo.output_dir = scratch_dir("sweep_solo");
    auto rows1 = sweep({solo}, 1);
    EXPECT_TRUE(rows1[0].ok);
    EXPECT_EQ(slurp(solo.output_dir + "/series.csv"), slurp(a.output_dir + "/series.csv"));
}

TEST(EmitPlot, SeriesOnRestRunIsZeroTable) {
    RunConfig c = small_run_config("plot_rest");
    c.family = InitFamily::Rest;
    run(c);
    std::stringstream out;
    emit_plot_data(c.output_dir + "/series.csv", PlotKind::Series, out);
    std::string line;
    std::getline(out, line);  // header
    int rows = 0;
    while (std::getline(out, line)) {
        std::stringstream ss(line);
        double t, val;
        ss >> t;
        int col = 0;
        // every dynamical column is zero; min_depth (col 6) sits at exactly 1
        while (ss >> val) EXPECT_EQ(val, col++ == 5 ? 1.0 : 0.0) << "column " << col;
        ++rows;
    }
    EXPECT_GT(rows, 0);
}

TEST(EmitPlot, SpectrumOfSingleModeHasOneRow) {
    auto dir = scratch_dir("plot_spec");
    auto g = make_grid(64);
    auto u = sample(g, [](double x) { return std::cos(5.0 * x); });
    Snapshot s;
    s.dim = 1;
    s.n1 = 64;
    s.n2 = 1;
    s.t = 0.0;
    s.fields = {u.v};
    write_snapshot(dir + "/m.bin", s);
    std::stringstream out;
    emit_plot_data(dir + "/m.bin", PlotKind::Spectrum, out);
    std::string line;
    std::getline(out, line);  // header
    while (std::getline(out, line)) {
        std::stringstream ss(line);
        int m;
        double mag;
        ss >> m >> mag;
        if (m == 5)
            EXPECT_NEAR(mag, std::sqrt(0.25 + 0.25), 1e-12);
        else
            EXPECT_LE(mag, 1e-14);
    }
}

TEST(EmitPlot, SnapshotTableMatchesBinaryExactly) {
    RunConfig c = small_run_config("plot_snap");
    c.family = InitFamily::Random;
    c.amplitude = 0.04;
    run(c);
    auto snap = read_snapshot(c.output_dir + "/snap_000000.bin");
    std::stringstream out;
    emit_plot_data(c.output_dir + "/snap_000000.bin", PlotKind::SnapshotProfile, out);
    std::string line;
    std::getline(out, line);  // t comment
    std::getline(out, line);  // header
    for (std::size_t i = 0; i < snap.n1; ++i) {
        ASSERT_TRUE(std::getline(out, line));
        std::stringstream ss(line);
        double x, eta, u;
        ss >> x >> eta >> u;
        EXPECT_EQ(eta, snap.fields[0][i]);  // 17-digit serialization round-trips
        EXPECT_EQ(u, snap.fields[1][i]);
    }
}

TEST(WhithamRun, ProducesSeries) {
    RunConfig c = small_run_config("whitham");
    c.model = ModelKind::Whitham1D;
    c.family = InitFamily::Gaussian;
    c.amplitude = 0.1;
    auto res = run(c);
    EXPECT_TRUE(res.all_pass());
    EXPECT_EQ(res.columns.front(), "Hs_u");
    EXPECT_GT(res.rows.front().cols.at("Hs_u"), 0.0);
}

TEST(Run2D, SmallRunAllPass) {
    RunConfig c = small_run_config("run2d");
    c.model = ModelKind::Boussinesq2D;
    c.n = 16;
    c.family = InitFamily::Gaussian;
    c.amplitude = 0.1;
    c.s = 3.1;
    auto res = run(c);
    EXPECT_TRUE(res.all_pass());
    EXPECT_TRUE(res.verdicts.count("curl_preserved"));
    auto snap = read_snapshot(c.output_dir + "/snap_000000.bin");
    EXPECT_EQ(snap.dim, 2);
    EXPECT_EQ(snap.fields.size(), 3u);
}
