#include "tracker_fixtures.hpp"

#include "ftlr/eval.hpp"
#include "ftlr/plot.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ftlr;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("ftlr_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

} // namespace

TEST(Groundtruth, SeparatorsAndOneBasedCorner)
{
    std::istringstream in("1,2,10,20\n3\t4\t5\t6\r\n\n7 8 9 10\n");
    const auto boxes = parse_groundtruth(in);
    ASSERT_EQ(boxes.size(), 3u);
    EXPECT_EQ(boxes[0], (BoundingBox{0, 1, 10, 20}));
    EXPECT_EQ(boxes[1], (BoundingBox{2, 3, 5, 6}));
    EXPECT_EQ(boxes[2], (BoundingBox{6, 7, 9, 10}));
}

TEST(Groundtruth, ErrorCarriesLineNumber)
{
    std::istringstream in("1,2,3,4\n1,2,x,4\n");
    try {
        parse_groundtruth(in, "gt.txt");
        FAIL();
    } catch (const IngestError& e) {
        EXPECT_NE(std::string(e.what()).find("gt.txt:2"), std::string::npos);
    }
}

TEST(Scores, SuccessIsStrictPrecisionInclusive)
{
    FrameScores s;
    s.ious = {1.0, 0.5, 0.0, 0.05};
    s.center_errors = {0.0, 20.0, 20.5, 50.0};
    const EvalResult r = summarize_scores(s, 10.0, Protocol::Ope);
    ASSERT_EQ(r.success_curve.size(), 21u);
    ASSERT_EQ(r.precision_curve.size(), 51u);
    EXPECT_DOUBLE_EQ(r.success_curve[0], 0.75);  // IoU > 0
    EXPECT_DOUBLE_EQ(r.success_curve[1], 0.5);   // IoU > 0.05
    EXPECT_DOUBLE_EQ(r.success_curve[10], 0.25); // IoU > 0.5
    EXPECT_DOUBLE_EQ(r.success_curve[20], 0.0);  // IoU > 1
    EXPECT_DOUBLE_EQ(r.precision_at_20, 0.5);
    EXPECT_DOUBLE_EQ(r.precision_curve[50], 1.0);
    double sum = 0;
    for (double v : r.success_curve)
        sum += v;
    EXPECT_DOUBLE_EQ(r.success_auc, sum / 21.0);
}

TEST(Tre, StartFrames)
{
    EXPECT_EQ(tre_start_frames(100, 4), (std::vector<int>{0, 25, 50, 75}));
    EXPECT_EQ(tre_start_frames(10, 3), (std::vector<int>{0, 3, 6}));
    EXPECT_EQ(tre_start_frames(3, 5), (std::vector<int>{0, 1, 2}));
    EXPECT_THROW(tre_start_frames(10, 0), std::invalid_argument);
}

TEST(Tre, PooledFrameCount)
{
    const Sequence seq = generate_synthetic(fixtures::smooth_spec(1, 1.0, 0.0, 23));
    const EvalResult r = run_tre(seq, TrackerConfig{}, 4);
    std::size_t expected = 0;
    for (int s : tre_start_frames(23, 4))
        expected += 23 - s;
    EXPECT_EQ(r.frame_count, expected);
    EXPECT_EQ(r.protocol, Protocol::Tre);
}

TEST(Tre, SingleSegmentEqualsOpe)
{
    const Sequence seq = generate_synthetic(fixtures::smooth_spec(2, 1.0, 1.0, 25));
    const EvalResult ope = run_ope(seq, TrackerConfig{});
    const EvalResult tre = run_tre(seq, TrackerConfig{}, 1);
    EXPECT_EQ(ope.success_curve, tre.success_curve);
    EXPECT_EQ(ope.precision_curve, tre.precision_curve);
    EXPECT_EQ(ope.success_auc, tre.success_auc);
    EXPECT_EQ(ope.frame_count, tre.frame_count);
}

TEST(Ope, PerfectTrajectoryScores)
{
    FrameScores s;
    const std::vector<BoundingBox> gt{{0, 0, 10, 10}, {5, 5, 10, 10}, {9, 1, 4, 7}};
    s.append(gt, gt);
    const EvalResult r = summarize_scores(s, 0.0, Protocol::Ope);
    EXPECT_EQ(r.precision_at_20, 1.0);
    EXPECT_NEAR(r.success_auc, 20.0 / 21.0, 1e-15);
}

TEST(Aggregate, MeansAndProtocolMixing)
{
    EvalResult a, b;
    a.success_auc = 0.2;
    b.success_auc = 0.6;
    a.precision_at_20 = 1.0;
    b.precision_at_20 = 0.0;
    a.fps = 10;
    b.fps = 30;
    const std::vector<EvalResult> rs{a, b};
    const Summary s = aggregate_results(rs);
    EXPECT_DOUBLE_EQ(s.success_auc, 0.4);
    EXPECT_DOUBLE_EQ(s.precision_at_20, 0.5);
    EXPECT_DOUBLE_EQ(s.fps, 20.0);
    b.protocol = Protocol::Tre;
    EXPECT_THROW(aggregate_results(std::vector<EvalResult>{a, b}), std::invalid_argument);
    EXPECT_THROW(aggregate_results(std::vector<EvalResult>{}), std::invalid_argument);
}

TEST(Dataset, WriteLoadRoundTrip)
{
    const fs::path dir = scratch_dir("roundtrip");
    SynthSpec spec = fixtures::smooth_spec(3, 0.5, -0.25, 6);
    spec.jumps.push_back({4, 7, 2});
    const Sequence seq = generate_synthetic(spec);
    write_otb_sequence(seq, dir / "seq");
    const SequenceDataset ds = load_otb_sequence(dir / "seq");
    EXPECT_EQ(ds.name, "seq");
    EXPECT_EQ(ds.gt_boxes, seq.gt);
    const Sequence back = load_sequence(ds);
    for (std::size_t i = 0; i < seq.frames.size(); ++i)
        ASSERT_TRUE(std::equal(seq.frames[i].pixels().begin(), seq.frames[i].pixels().end(),
                               back.frames[i].pixels().begin()));
    EXPECT_EQ(find_sequences(dir), (std::vector<fs::path>{dir / "seq"}));
}

TEST(Dataset, MismatchedCountsRejected)
{
    const fs::path dir = scratch_dir("mismatch");
    write_otb_sequence(generate_synthetic(fixtures::smooth_spec(4, 0, 0, 3)), dir / "s");
    std::ofstream(dir / "s" / "groundtruth_rect.txt", std::ios::app) << "1,1,5,5\n";
    EXPECT_THROW(load_otb_sequence(dir / "s"), IngestError);
    EXPECT_THROW(load_otb_sequence(dir / "missing"), IngestError);
}

TEST(Suite, WorkersDoNotChangeResults)
{
    std::vector<Sequence> seqs;
    for (std::uint64_t k = 0; k < 3; ++k) {
        SynthSpec s = fixtures::smooth_spec(10 + k, 1.0, 0.0, 15);
        s.name = "s" + std::to_string(k);
        seqs.push_back(generate_synthetic(s));
    }
    std::vector<TrackerConfig> cfgs(2);
    cfgs[1].variant = Variant::Baseline;
    const auto one = evaluate_suite(seqs, cfgs, Protocol::Tre, 3, 1);
    const auto four = evaluate_suite(seqs, cfgs, Protocol::Tre, 3, 4);
    ASSERT_EQ(one.size(), 6u);
    std::ostringstream a, b, c, d;
    write_summary_csv(a, one);
    write_summary_csv(b, four);
    write_curves_csv(c, one);
    write_curves_csv(d, four);
    EXPECT_EQ(a.str(), b.str());
    EXPECT_EQ(c.str(), d.str());
    EXPECT_EQ(one[0].sequence, "s0");
    EXPECT_EQ(one[1].variant, "baseline");
}

TEST(Curves, CsvRoundTripAndSvg)
{
    std::vector<Sequence> seqs{generate_synthetic(fixtures::smooth_spec(20, 0.5, 0.5, 10))};
    const auto records = evaluate_suite(seqs, std::vector<TrackerConfig>(1), Protocol::Ope);
    std::stringstream csv;
    write_curves_csv(csv, records);
    const auto rows = read_curves_csv(csv);
    EXPECT_EQ(rows.size(), static_cast<std::size_t>(kSuccessPoints + kPrecisionPoints));
    const fs::path dir = scratch_dir("svg");
    write_curve_svgs(dir, rows);
    EXPECT_TRUE(fs::file_size(dir / "success_plot.svg") > 200);
    EXPECT_TRUE(fs::file_size(dir / "precision_plot.svg") > 200);
}
