#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fraczeta/io.hpp"

using namespace fraczeta;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("fraczeta_test_io_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_text(const std::string& name, const std::string& text) {
  const auto p = fs::temp_directory_path() / ("fraczeta_test_io_" + name);
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

std::string config_error(const std::string& text) {
  try {
    config_from_json(json::parse(text));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Format, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(1e-20), "1e-20");
  const double x = 7.8079250633246856;
  EXPECT_EQ(std::stod(format_number(x)), x);
}

TEST(Format, ParseReal) {
  EXPECT_DOUBLE_EQ(parse_real(json(2.5), "x"), 2.5);
  EXPECT_DOUBLE_EQ(parse_real(json("5/3"), "x"), 5.0 / 3.0);
  EXPECT_NEAR(parse_real(json("log(5)/log(2)"), "x"), std::log(5.0) / std::log(2.0), 1e-15);
  EXPECT_THROW(parse_real(json("five"), "x"), ConfigError);
  EXPECT_THROW(parse_real(json("1/0"), "x"), ConfigError);
}

TEST(Config, Presets) {
  const auto i = load_config("interval");
  EXPECT_EQ(i.model.N, 2);
  EXPECT_DOUBLE_EQ(i.model.tau, 4.0);
  EXPECT_DOUBLE_EQ(i.model.d_S, 1.0);

  const auto g = load_config("gasket");
  EXPECT_EQ(g.model.N, 3);
  EXPECT_DOUBLE_EQ(g.model.tau, 5.0);
  EXPECT_NEAR(g.model.d_S, 1.3652124, 1e-7);
  ASSERT_TRUE(g.decimation.has_value());

  const auto t = load_config("toy(7,4)");
  EXPECT_EQ(t.model.N, 7);
  EXPECT_DOUBLE_EQ(t.model.tau, 4.0);
  EXPECT_EQ(load_config("carpet").spectrum.source, "none");
}

TEST(Config, FileMatchesPreset) {
  const auto file = load_config(FRACZETA_SOURCE_DIR "/configs/gasket.json");
  const auto preset = preset_config("gasket");
  EXPECT_DOUBLE_EQ(file.model.tau, preset.model.tau);
  EXPECT_NEAR(file.model.d_w, preset.model.d_w, 1e-15);
  EXPECT_DOUBLE_EQ(file.continuation.t_min, preset.continuation.t_min);
  EXPECT_EQ(file.spectrum.levels, preset.spectrum.levels);
  EXPECT_EQ(build_spectrum(file).pairs, build_spectrum(preset).pairs);
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_NE(config_error(R"({"model": {"N": 3, "rho_F": "5/3", "d_w": 2, "d_boundary": 2}})").find("d_boundary >= d_f"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"model": {"N": 3, "rho_F": "1/4", "d_w": 2}})").find("tau <= 1"), std::string::npos);
  EXPECT_NE(config_error(R"({"model": {"N": 3, "d_w": 2}})").find("model.rho_F"), std::string::npos);
  EXPECT_NE(config_error(R"({"modle": {}})").find("config.modle"), std::string::npos);
  EXPECT_NE(config_error(R"({"weyl": {"window": [2, 1]}})").find("weyl.window"), std::string::npos);
  EXPECT_NE(config_error(R"({"gamma": -1})").find("gamma"), std::string::npos);
  EXPECT_NE(config_error(R"({"preset": "cantor"})").find("cantor"), std::string::npos);
}

TEST(Config, ParseErrorReportsLine) {
  const auto p = write_text("broken.json", "{\n  \"preset\": \"interval\",\n  \"gamma\": ,\n}\n");
  try {
    load_config(p.string());
    FAIL() << "expected a ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Config, MissingFile) {
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Artifacts, SpectrumCsvHeader) {
  const auto csv = spectrum_csv(interval_spectrum(3));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "index,value,multiplicity");
}

TEST(Artifacts, ZetaCsvSchema) {
  ZetaPoint p{{0.5, -1.0}, 0.0, {1.25, 0.5}, ZetaMethod::continued, 1e-12};
  EXPECT_EQ(zeta_csv({p}), "Re_s,Im_s,gamma,Re_zeta,Im_zeta,error_bound,method\n0.5,-1,0,1.25,0.5,1e-12,continued\n");
}

TEST(Artifacts, ZetaGridSkipsPoleCell) {
  const auto c = preset_config("interval");
  const SpectralZeta z(interval_spectrum(2000), c.model, c.continuation);
  GridSpec g{0.8, 1.2, 0.1, -0.5, 0.5, 0.5};
  EXPECT_EQ(zeta_grid(z, c.model, g, 0.0).size(), 5u * 3u - 1u);
}

TEST(Artifacts, PoleJsonRoundTrip) {
  PoleReport r;
  PoleEstimate a;
  a.position = {1.3652123889719707, -7.8079250633246856};
  a.n = -1;
  a.residue = cplx(0.1, -1e-17);
  a.match_distance = 3.5e-12;
  a.source = PoleSource::located;
  PoleEstimate b;
  b.position = {-0.6347876110280293, 0.0};
  b.m = 1;
  b.k_index = 0;
  b.residue_vanishes = true;
  r.located.push_back(a);
  r.predicted.push_back(b);

  const auto text = poles_json(r);
  const auto back = load_poles_json(text);
  ASSERT_EQ(back.located.size(), 1u);
  ASSERT_EQ(back.predicted.size(), 1u);
  EXPECT_EQ(back.located[0].position, a.position);
  EXPECT_EQ(*back.located[0].residue, *a.residue);
  EXPECT_EQ(back.located[0].match_distance, a.match_distance);
  EXPECT_EQ(back.located[0].n, -1);
  EXPECT_EQ(back.predicted[0].m, 1);
  EXPECT_FALSE(back.predicted[0].residue.has_value());
  EXPECT_TRUE(std::isnan(back.predicted[0].match_distance));
  EXPECT_TRUE(back.predicted[0].residue_vanishes);
  EXPECT_EQ(poles_json(back), text);
}

TEST(Artifacts, RewriteIsByteIdentical) {
  const auto dir = scratch("rewrite");
  const auto content = spectrum_csv(decimation_graph_spectrum(4, gasket_decimation(), presets::gasket()).batch);
  {
    ArtifactSet a(dir);
    a.write("s.csv", content);
    a.commit();
  }
  const auto first = slurp(dir / "s.csv");
  {
    ArtifactSet a(dir);
    a.write("s.csv", spectrum_csv(decimation_graph_spectrum(4, gasket_decimation(), presets::gasket()).batch));
    a.commit();
  }
  EXPECT_EQ(slurp(dir / "s.csv"), first);
  fs::remove_all(dir);
}

TEST(Artifacts, UncommittedFilesAreRemoved) {
  const auto dir = scratch("partial");
  try {
    ArtifactSet a(dir);
    a.write("first.csv", "x\n");
    EXPECT_TRUE(fs::exists(dir / "first.csv"));
    throw ConvergenceError("simulated failure");
  } catch (const ConvergenceError&) {
  }
  EXPECT_FALSE(fs::exists(dir / "first.csv"));
  fs::remove_all(dir);
}

TEST(Artifacts, SpectrumMetaCarriesTailBound) {
  const auto j = json::parse(spectrum_meta_json(interval_spectrum(50)));
  EXPECT_DOUBLE_EQ(j.at("tail_exponent").get<double>(), 0.5);
  EXPECT_GT(j.at("tail_constant").get<double>(), 0.0);
  EXPECT_EQ(j.at("pairs").get<int>(), 50);
}
