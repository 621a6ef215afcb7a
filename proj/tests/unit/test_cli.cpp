#include "ftlr/config.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const fs::path kCli = FTLR_CLI_PATH;
const fs::path kData = FTLR_DATA_DIR;

fs::path work_dir()
{
    static const fs::path dir = [] {
        const fs::path p = fs::temp_directory_path() / "ftlr_cli_test";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

int cli(const std::string& args, const std::string& env = "")
{
    const std::string cmd = env + " '" + kCli.string() + "' " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int line_count(const fs::path& p)
{
    int n = 0;
    std::ifstream in(p);
    for (std::string line; std::getline(in, line);)
        ++n;
    return n;
}

// Bundled spec generated once per test binary.
const fs::path& jump_sequence()
{
    static const fs::path seq = [] {
        const fs::path out = work_dir() / "synth";
        EXPECT_EQ(cli("synth '" + (kData / "jump.spec").string() + "' --out '" + out.string() + "'"), 0);
        return out / "jump";
    }();
    return seq;
}

} // namespace

TEST(Cli, SynthBundledSpecHasOneJump)
{
    const fs::path seq = jump_sequence();
    EXPECT_EQ(line_count(seq / "groundtruth_rect.txt"), 100);
    const auto kv = ftlr::load_key_values(seq.parent_path() / "resolved_config.txt");
    EXPECT_EQ(kv.at("jumps").find(';'), std::string::npos);
    EXPECT_FALSE(kv.at("jumps").empty());
}

TEST(Cli, SynthIsDeterministic)
{
    const fs::path a = work_dir() / "synth_a", b = work_dir() / "synth_b";
    const std::string spec = (kData / "jump.spec").string();
    ASSERT_EQ(cli("synth '" + spec + "' --out '" + a.string() + "'"), 0);
    ASSERT_EQ(cli("synth '" + spec + "' --out '" + b.string() + "'"), 0);
    for (const auto& e : fs::recursive_directory_iterator(a))
        if (e.is_regular_file())
            ASSERT_EQ(slurp(e.path()), slurp(b / fs::relative(e.path(), a))) << e.path();
}

TEST(Cli, SynthRejectsOutOfBoundsJump)
{
    const fs::path spec = work_dir() / "bad.spec";
    std::ofstream(spec) << "frame_count=10\njumps=5:400:0\n";
    EXPECT_EQ(cli("synth '" + spec.string() + "' --out '" + (work_dir() / "bad").string() + "'"), 2);
}

TEST(Cli, RunWritesOneRowPerFrameAndReplays)
{
    const fs::path out = work_dir() / "run";
    ASSERT_EQ(cli("run '" + jump_sequence().string() + "' --variant ftlr_sa --nndr 1.2 --out '" + out.string() + "'"),
              0);
    EXPECT_EQ(line_count(out / "trajectory.csv"), 101);
    EXPECT_EQ(slurp(out / "trajectory.csv").substr(0, 47), "frame_index,x,y,w,h,confident,ratio,used_backup");
    const fs::path replay = work_dir() / "run_replay";
    ASSERT_EQ(cli("run --config '" + (out / "resolved_config.txt").string() + "' --out '" + replay.string() + "'"), 0);
    for (const char* f : {"trajectory.csv", "trace.csv", "resolved_config.txt"})
        EXPECT_EQ(slurp(out / f), slurp(replay / f)) << f;
}

TEST(Cli, FlagsOverrideConfigFile)
{
    const fs::path cfg = work_dir() / "cfg.txt";
    std::ofstream(cfg) << "nndr_threshold=1.5\nalpha=0.01\n";
    const fs::path out = work_dir() / "override";
    ASSERT_EQ(cli("run '" + jump_sequence().string() + "' --config '" + cfg.string() + "' --nndr 1.3 --out '" +
                  out.string() + "'"),
              0);
    const auto kv = ftlr::load_key_values(out / "resolved_config.txt");
    EXPECT_EQ(kv.at("nndr_threshold"), "1.3");
    EXPECT_EQ(kv.at("alpha"), "0.01");
}

TEST(Cli, EnvironmentConfigIsDefault)
{
    const fs::path cfg = work_dir() / "env.txt";
    std::ofstream(cfg) << "alpha=0.02\n";
    const fs::path out = work_dir() / "env";
    ASSERT_EQ(cli("run '" + jump_sequence().string() + "' --out '" + out.string() + "'",
                  "FTLR_CONFIG='" + cfg.string() + "'"),
              0);
    EXPECT_EQ(ftlr::load_key_values(out / "resolved_config.txt").at("alpha"), "0.02");
}

TEST(Cli, DumpResponseWritesGrids)
{
    const fs::path out = work_dir() / "dump";
    ASSERT_EQ(cli("run '" + jump_sequence().string() + "' --dump-response --out '" + out.string() + "'"), 0);
    EXPECT_TRUE(fs::exists(out / "responses" / "response_0002.csv"));
    EXPECT_EQ(line_count(out / "responses" / "response_0002.csv"), 65);
}

TEST(Cli, FtlrGtWithoutGroundTruthIsUsageError)
{
    const fs::path seq = work_dir() / "nogt";
    fs::create_directories(seq);
    fs::copy(jump_sequence() / "img", seq / "img", fs::copy_options::recursive);
    EXPECT_EQ(cli("run '" + seq.string() + "' --variant ftlr_gt --init 10,10,32,32 --out '" +
                  (work_dir() / "nogt_out").string() + "'"),
              2);
    // Other variants run from --init alone.
    EXPECT_EQ(cli("run '" + seq.string() + "' --variant ftlr --init 65,113,32,32 --out '" +
                  (work_dir() / "nogt_ok").string() + "'"),
              0);
}

TEST(Cli, ExitCodes)
{
    EXPECT_EQ(cli("run '" + jump_sequence().string() + "' --variant nope --out '" + work_dir().string() + "/x'"), 2);
    EXPECT_EQ(cli("frobnicate"), 2);
    const fs::path broken = work_dir() / "broken";
    fs::create_directories(broken / "img");
    std::ofstream(broken / "img" / "0001.png") << "not an image";
    std::ofstream(broken / "img" / "0002.png") << "not an image";
    std::ofstream(broken / "groundtruth_rect.txt") << "1,1,8,8\n1,1,8,8\n";
    EXPECT_EQ(cli("run '" + broken.string() + "' --out '" + (work_dir() / "broken_out").string() + "'"), 3);
}

TEST(Cli, EvalFourVariantsAndTreDegeneracy)
{
    const fs::path root = jump_sequence().parent_path();
    const fs::path ope = work_dir() / "eval_ope", tre = work_dir() / "eval_tre1";
    ASSERT_EQ(cli("eval '" + root.string() + "' --variant baseline,ftlr,ftlr_sa,ftlr_gt --protocol ope --out '" +
                  ope.string() + "'"),
              0);
    EXPECT_EQ(line_count(ope / "summary.csv"), 1 + 4 + 4);
    ASSERT_EQ(cli("eval '" + root.string() + "' --variant baseline,ftlr,ftlr_sa,ftlr_gt --protocol tre --segments 1 "
                  "--out '" + tre.string() + "'"),
              0);
    auto strip_protocol = [](std::string s) {
        for (std::size_t p; (p = s.find(",tre,")) != std::string::npos;)
            s.replace(p, 5, ",ope,");
        return s;
    };
    EXPECT_EQ(strip_protocol(slurp(tre / "summary.csv")), slurp(ope / "summary.csv"));
    EXPECT_EQ(strip_protocol(slurp(tre / "curves.csv")), slurp(ope / "curves.csv"));
}

TEST(Cli, EvalReplayAndWorkers)
{
    const fs::path root = jump_sequence().parent_path();
    const fs::path a = work_dir() / "eval_w1", b = work_dir() / "eval_w3", c = work_dir() / "eval_replay";
    ASSERT_EQ(cli("eval '" + root.string() + "' --variant ftlr,baseline --protocol tre --segments 3 --workers 1 "
                  "--out '" + a.string() + "'"),
              0);
    ASSERT_EQ(cli("eval '" + root.string() + "' --variant ftlr,baseline --protocol tre --segments 3 --workers 3 "
                  "--out '" + b.string() + "'"),
              0);
    ASSERT_EQ(cli("eval --config '" + (a / "resolved_config.txt").string() + "' --out '" + c.string() + "'"), 0);
    for (const char* f : {"summary.csv", "curves.csv"}) {
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
        EXPECT_EQ(slurp(a / f), slurp(c / f)) << f;
    }
    EXPECT_EQ(slurp(a / "resolved_config.txt"), slurp(c / "resolved_config.txt"));
}

TEST(Cli, EvalEmptyRootFails)
{
    const fs::path empty = work_dir() / "empty_root";
    fs::create_directories(empty);
    EXPECT_EQ(cli("eval '" + empty.string() + "' --out '" + (work_dir() / "empty_out").string() + "'"), 3);
}

TEST(Cli, PlotAndCalibrate)
{
    const fs::path root = jump_sequence().parent_path();
    const fs::path ev = work_dir() / "eval_plot";
    ASSERT_EQ(cli("eval '" + root.string() + "' --variant ftlr_sa --out '" + ev.string() + "'"), 0);
    const fs::path pl = work_dir() / "plot";
    ASSERT_EQ(cli("plot '" + (ev / "curves.csv").string() + "' --out '" + pl.string() + "'"), 0);
    EXPECT_TRUE(fs::exists(pl / "success_plot.svg"));
    EXPECT_TRUE(fs::exists(pl / "precision_plot.svg"));
    const fs::path cal = work_dir() / "calibrate";
    ASSERT_EQ(cli("calibrate-nndr --count 2 --thresholds 1.1,1.5 --out '" + cal.string() + "'"), 0);
    EXPECT_EQ(line_count(cal / "calibration.csv"), 3);
    const fs::path cal2 = work_dir() / "calibrate_replay";
    ASSERT_EQ(cli("calibrate-nndr --config '" + (cal / "resolved_config.txt").string() + "' --out '" +
                  cal2.string() + "'"),
              0);
    EXPECT_EQ(slurp(cal / "calibration.csv"), slurp(cal2 / "calibration.csv"));
}
