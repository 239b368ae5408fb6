#include <gtest/gtest.h>

#include <tzitzeica/config.hpp>

#include <filesystem>
#include <fstream>
#include <cstring>
#include <random>

using namespace tzitzeica;

namespace {

int error_line(const std::string& text) {
    try {
        parse_config_string(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

std::string error_text(const std::string& text) {
    try {
        parse_config_string(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST(Config, EmptyGivesDefaults) {
    const auto c = parse_config_string("");
    const AppConfig d;
    for (const auto& k : config_schema()) EXPECT_EQ(k.get(c), k.get(d)) << k.key;
    EXPECT_EQ(c.exp.data.kind, DataKind::gaussian);
    EXPECT_EQ(c.exp.data.amplitude, -0.1);
    EXPECT_EQ(c.exp.data.width, 1.0);
    EXPECT_EQ(c.exp.grid.count, 400u);
    EXPECT_EQ(c.exp.times, (std::vector<double>{20, 30, 40, 50}));
    // comments and blank lines only
    EXPECT_NO_THROW(parse_config_string("# nothing\n\n   # indented comment\n"));
}

TEST(Config, DxRescalesTimeStep) {
    const auto c = parse_config_string("pde.dx = 0.01\n");
    EXPECT_EQ(c.exp.pde.dx, 0.01);
    EXPECT_DOUBLE_EQ(c.exp.pde.time_step(), 0.009);
    const auto d = parse_config_string("pde.dx = 0.01   # finer grid\npde.cfl = 0.5\n");
    EXPECT_DOUBLE_EQ(d.exp.pde.time_step(), 0.005);
}

TEST(Config, RangeErrorNamesKey) {
    const auto msg = error_text("grid.lambda_max = -1\n");
    EXPECT_NE(msg.find("grid.lambda_max"), std::string::npos) << msg;
    EXPECT_NE(msg.find("out of range"), std::string::npos) << msg;
    EXPECT_EQ(error_line("grid.lambda_max = -1\n"), 1);
    EXPECT_NE(error_text("pde.cfl = 1.5").find("pde.cfl"), std::string::npos);
    EXPECT_NE(error_text("grid.count = 2.5").find("grid.count"), std::string::npos);
}

TEST(Config, UnknownKeyReportsLine) {
    EXPECT_EQ(error_line("# header\n\npde.dx = 0.02\nfoo.bar = 3\n"), 4);
    EXPECT_NE(error_text("foo.bar = 3").find("unknown key 'foo.bar'"), std::string::npos);
}

TEST(Config, MalformedAndDuplicateLines) {
    EXPECT_EQ(error_line("pde.dx = 0.02\npde.cfl 0.5\n"), 2);
    EXPECT_EQ(error_line("pde.dx = 0.02\npde.dx = 0.01\n"), 2);
    EXPECT_EQ(error_line("pde.dx = fast\n"), 1);
    EXPECT_EQ(error_line("data.kind = sphere\n"), 1);
}

TEST(Config, CrossKeyChecks) {
    EXPECT_THROW(parse_config_string("compare.times = 20, 60\n"), ConfigError);
    EXPECT_THROW(parse_config_string("grid.lambda_min = 40\n"), ConfigError);
    EXPECT_THROW(parse_config_string("data.kind = file\n"), ConfigError);
    EXPECT_THROW(parse_config_string("compare.window = 0.9\n"), ConfigError);
    EXPECT_THROW(parse_config_string("pde.L = 30\n"), ConfigError);
    const auto c = parse_config_string("compare.times = 10, 20\npde.snapshot_times = 5\n");
    EXPECT_EQ(c.exp.times, (std::vector<double>{10, 20}));
    EXPECT_EQ(c.exp.snapshot_times, (std::vector<double>{5}));
}

TEST(Config, MissingFile) {
    EXPECT_THROW(parse_config_file("/nonexistent/config.txt"), ConfigError);
    const auto p = std::filesystem::temp_directory_path() / "tz_config_test.txt";
    {
        std::ofstream os(p);
        os << "data.kind = zero\ngrid.count = 50\n";
    }
    const auto c = parse_config_file(p.string());
    EXPECT_EQ(c.exp.data.kind, DataKind::zero);
    EXPECT_EQ(c.exp.grid.count, 50u);
    std::filesystem::remove(p);
}

TEST(Config, HelpListsEveryKeyWithDefault) {
    const auto help = config_help();
    std::istringstream is(help);
    std::string line;
    std::getline(is, line); // title
    std::vector<std::string> listed;
    const AppConfig d;
    while (std::getline(is, line)) {
        const auto eq = line.find(" = ");
        ASSERT_NE(eq, std::string::npos) << line;
        const std::string key = detail::trim(line.substr(0, eq));
        const auto* k = find_key(key);
        ASSERT_NE(k, nullptr) << key;
        const auto rest = line.substr(eq + 3);
        EXPECT_EQ(rest.substr(0, rest.find("  [")), k->get(d)) << key;
        EXPECT_NE(rest.find("[" + k->unit + "]"), std::string::npos) << key;
        listed.push_back(key);
    }
    ASSERT_EQ(listed.size(), config_schema().size());
    for (std::size_t i = 0; i < listed.size(); ++i) EXPECT_EQ(listed[i], config_schema()[i].key);
}

TEST(Config, DefaultsRoundTripThroughParser) {
    const AppConfig d;
    for (const auto& k : config_schema()) {
        if (k.key == "data.file") continue; // empty by default; only valid with data.kind = file
        const auto c = parse_config_string(k.key + " = " + k.get(d) + "\n");
        EXPECT_EQ(k.get(c), k.get(d)) << k.key;
    }
}

TEST(Config, ValuesRoundTripExactly) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.5, 0.79);
    for (int i = 0; i < 200; ++i) {
        const double w = u(rng);
        const auto c = parse_config_string("compare.window = " + format_number(w) + "\n");
        EXPECT_EQ(c.exp.window, w);
    }
}

TEST(Csv, FormattingRoundTripProperty) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::uint64_t> bits;
    int tested = 0;
    while (tested < 20000) {
        const std::uint64_t b = bits(rng);
        double v;
        std::memcpy(&v, &b, sizeof v);
        if (!std::isfinite(v)) continue;
        ++tested;
        ASSERT_EQ(parse_number(format_number(v)), v) << format_number(v);
    }
    // locale-independent, '.' decimal, scientific for small magnitudes
    EXPECT_EQ(format_number(0.5), "0.5");
    EXPECT_EQ(format_number(5e-5), "5.0000000000000002e-05");
    EXPECT_EQ(format_number(-2.0), "-2");
}
