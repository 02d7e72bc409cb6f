#include "cli.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace qvn::cli;

namespace {

int invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "qvn-cli");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return main_entry(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string temp_path(const std::string& name) { return testing::TempDir() + name; }

}  // namespace

TEST(Ini, ParsesSectionsAndComments) {
    std::istringstream in("# device\n[device]\neta = 0.2 ; MHz would be wrong\ng_b=0.03\n\n[pulse]\nsigma = 1.94\n");
    Settings s = parse_ini(in, "t.ini");
    EXPECT_EQ(s["device"]["eta"], "0.2");
    EXPECT_EQ(s["device"]["g_b"], "0.03");
    EXPECT_EQ(s["pulse"]["sigma"], "1.94");
}

TEST(Ini, UnknownKeyNamesKeyAndLine) {
    std::istringstream in("[device]\neta = 0.2\n\netta = 0.3\n");
    try {
        parse_ini(in, "t.ini");
        FAIL() << "accepted an unknown key";
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("device.etta"), std::string::npos) << msg;
        EXPECT_NE(msg.find("t.ini:4"), std::string::npos) << msg;
    }
}

TEST(Ini, UnknownSectionRejected) {
    std::istringstream in("[devices]\n");
    EXPECT_THROW(parse_ini(in), ConfigError);
}

TEST(Assignment, SetsKnownKeyOnly) {
    Settings s = default_settings();
    apply_assignment(s, "device.g_m=0.09");
    EXPECT_EQ(s["device"]["g_m"], "0.09");
    EXPECT_THROW(apply_assignment(s, "device.gm=0.09"), ConfigError);
    EXPECT_THROW(apply_assignment(s, "nodot"), ConfigError);
}

TEST(RunSpec, DeviceFromDefaults) {
    RunSpec r;
    r.settings = default_settings();
    qvn::DeviceConfig d = r.device();
    EXPECT_EQ(d.n_qubits, 4);
    EXPECT_DOUBLE_EQ(d.memory_freqs[3], 8.0);
    r.settings["device"]["g_b"] = "fast";
    EXPECT_THROW(r.device(), ConfigError);
}

TEST(Commands, TransmonTable) {
    RunSpec r;
    r.command = "transmon";
    r.settings = default_settings();
    RunResult out = run(r);
    ASSERT_EQ(out.table.columns.size(), 4u);
    EXPECT_EQ(out.table.rows.size(), 3u * 17u);
    const std::string csv = to_csv(out.table);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "eta_ghz,ratio,eps_ghz,valid");
}

TEST(Commands, JsonRoundTripReproducesSettings) {
    RunSpec r;
    r.command = "estimate";
    r.settings = default_settings();
    r.settings["estimate"]["kind"] = "precision";
    r.settings["device"]["g_b"] = "0.06";
    const std::string js = to_json(run(r).table, r);
    Settings back = default_settings();
    merge_settings(back, parse_json_config(js), "json");
    EXPECT_EQ(back, r.settings);
    auto j = nlohmann::json::parse(js);
    EXPECT_EQ(j["rows"].size(), 2u);
}

TEST(MainEntry, ExitCodes) {
    const std::string out = temp_path("qvn_cli_precision.csv");
    EXPECT_EQ(invoke({"estimate", "--set", "estimate.kind=precision", "--gb", "0.045", "--out", out}), 0);
    const std::string csv = slurp(out);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "loss,ton_precision_ps,omega_on_precision_mhz");
    EXPECT_EQ(invoke({"estimate", "--set", "estimate.kind=nonsense"}), 2);
    EXPECT_EQ(invoke({"no-such-command"}), 2);
    EXPECT_EQ(invoke({"transmon", "--set", "transmon.bogus=1"}), 2);
    EXPECT_EQ(invoke({"estimate", "--eta", "-0.3"}), 2);
    std::remove(out.c_str());
}

TEST(MainEntry, ConfigFileAndJsonReingestion) {
    const std::string ini = temp_path("qvn_cli.ini");
    {
        std::ofstream f(ini);
        f << "[device]\neta = 0.4\ng_b = 0.06\n[estimate]\nkind = switching\n[pulse]\nt_ramp = 7\n";
    }
    const std::string js = temp_path("qvn_cli.json");
    ASSERT_EQ(invoke({"estimate", "--config", ini, "--format", "json", "--out", js}), 0);
    auto first = nlohmann::json::parse(slurp(js));
    EXPECT_EQ(first["config"]["device"]["eta"], "0.4");
    // the emitted JSON is itself a valid config
    const std::string js2 = temp_path("qvn_cli2.json");
    ASSERT_EQ(invoke({"estimate", "--config", js, "--format", "json", "--out", js2}), 0);
    auto second = nlohmann::json::parse(slurp(js2));
    EXPECT_EQ(first["rows"], second["rows"]);
    // sigma follows from t_ramp when only the ramp is given
    const double sigma = first["rows"][0]["sigma_ns"];
    EXPECT_NEAR(sigma, 7.0 / (4.0 * std::sqrt(2.0)), 1e-9);
    std::remove(ini.c_str());
    std::remove(js.c_str());
    std::remove(js2.c_str());
}

TEST(MainEntry, MissingConfigIsValidationError) {
    EXPECT_EQ(invoke({"transmon", "--config", "/nonexistent/qvn.ini"}), 2);
}
