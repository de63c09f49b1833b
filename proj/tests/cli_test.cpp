#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / "avocast_cli_test";
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliResult run(const std::string& args) {
    const fs::path out_file = dir_ / "stdout.txt";
    const fs::path err_file = dir_ / "stderr.txt";
    std::string cmd = std::string(AVOCAST_CLI_PATH) + " " + args + " >" + out_file.string() +
                      " 2>" + err_file.string();
    int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, EndToEndPipelineEmitsAllArtifacts) {
  const fs::path data = dir_ / "data.csv";
  CliResult gen = run("gen --out " + data.string() + " --regions 2 --weeks 60 --seed 3");
  ASSERT_EQ(gen.exit_code, 0) << gen.err;
  ASSERT_TRUE(fs::exists(data));

  const fs::path cfg = dir_ / "cfg.txt";
  {
    std::ofstream f(cfg);
    f << "epochs=3\nwindow_len=6\nhidden_channels=6\nnum_blocks=2\nkernel_size=3\n"
         "mlp_hidden=6\nhidden_dim=6\nattn_dim=6\nseed=11\n";
  }
  const fs::path run_dir = dir_ / "run";
  CliResult tr = run("train --data " + data.string() + " --config " + cfg.string() +
                     " --out-dir " + run_dir.string());
  ASSERT_EQ(tr.exit_code, 0) << tr.err;
  EXPECT_TRUE(fs::exists(run_dir / "checkpoint.bin"));
  EXPECT_TRUE(fs::exists(run_dir / "loss_curve.csv"));
  EXPECT_TRUE(fs::exists(run_dir / "train_report.txt"));
  EXPECT_TRUE(fs::exists(run_dir / "config_resolved.txt"));
  EXPECT_NE(tr.out.find("resolved config:"), std::string::npos);
  EXPECT_NE(tr.out.find("epochs=3"), std::string::npos);

  CliResult ev = run("evaluate --data " + data.string() + " --checkpoint " +
                     (run_dir / "checkpoint.bin").string() + " --out-dir " + run_dir.string());
  ASSERT_EQ(ev.exit_code, 0) << ev.err;
  EXPECT_TRUE(fs::exists(run_dir / "predictions.csv"));
  EXPECT_TRUE(fs::exists(run_dir / "metrics.json"));

  std::string predictions = slurp(run_dir / "predictions.csv");
  EXPECT_EQ(predictions.substr(0, 36), "date,region,type,actual,predicted\n20");

  CliResult st = run("stats --data " + data.string() + " --out " + (dir_ / "corr.csv").string() +
                     " --out-cleaned " + (dir_ / "cleaned.csv").string());
  ASSERT_EQ(st.exit_code, 0) << st.err;
  EXPECT_TRUE(fs::exists(dir_ / "corr.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "cleaned.csv"));
  EXPECT_NE(st.out.find("rows: 240"), std::string::npos);
}

TEST_F(CliTest, PredictPrintsOneNumber) {
  const fs::path data = dir_ / "data.csv";
  ASSERT_EQ(run("gen --out " + data.string() + " --regions 1 --weeks 40 --seed 5").exit_code, 0);
  const fs::path cfg = dir_ / "cfg.txt";
  {
    std::ofstream f(cfg);
    f << "epochs=2\nwindow_len=6\nhidden_channels=4\nnum_blocks=2\nkernel_size=3\n"
         "mlp_hidden=4\nhidden_dim=4\nattn_dim=4\n";
  }
  const fs::path run_dir = dir_ / "run";
  ASSERT_EQ(run("train --data " + data.string() + " --config " + cfg.string() + " --out-dir " +
                run_dir.string())
                .exit_code,
            0);

  // Extract one series: the generated file keeps each series contiguous.
  const fs::path window = dir_ / "window.csv";
  {
    std::ifstream in(data);
    std::ofstream out(window);
    std::string line;
    for (int i = 0; i < 13 && std::getline(in, line); ++i) out << line << '\n';
  }
  CliResult pr = run("predict --checkpoint " + (run_dir / "checkpoint.bin").string() +
                     " --window " + window.string());
  ASSERT_EQ(pr.exit_code, 0) << pr.err;
  EXPECT_GT(std::stod(pr.out), 0.0);
}

TEST_F(CliTest, MalformedCsvFailsWithSchemaError) {
  const fs::path data = dir_ / "bad.csv";
  {
    std::ofstream f(data);
    f << "Date,type,year,Region,4046,4225,4770,Salesvolume,weather\n";
    f << "2015-01-04,conventional,2015,A,1,2,3,4,0.5\n";
  }
  CliResult tr = run("train --data " + data.string() + " --out-dir " + (dir_ / "r").string());
  EXPECT_NE(tr.exit_code, 0);
  EXPECT_NE(tr.err.find("error:"), std::string::npos);
  EXPECT_NE(tr.err.find("AveragePrice"), std::string::npos);
  // single-line machine-parseable failure
  EXPECT_EQ(std::count(tr.err.begin(), tr.err.end(), '\n'), 1);
}

TEST_F(CliTest, UnknownConfigKeyFails) {
  const fs::path data = dir_ / "data.csv";
  ASSERT_EQ(run("gen --out " + data.string() + " --regions 1 --weeks 30 --seed 5").exit_code, 0);
  const fs::path cfg = dir_ / "cfg.txt";
  {
    std::ofstream f(cfg);
    f << "learning_rat=0.1\n";
  }
  CliResult tr = run("train --data " + data.string() + " --config " + cfg.string() +
                     " --out-dir " + (dir_ / "r").string());
  EXPECT_NE(tr.exit_code, 0);
  EXPECT_NE(tr.err.find("learning_rat"), std::string::npos);
}

TEST_F(CliTest, GradcheckPasses) {
  CliResult gc = run("gradcheck --seed 12");
  EXPECT_EQ(gc.exit_code, 0) << gc.err;
  EXPECT_NE(gc.out.find("PASS"), std::string::npos);
}
