#include <doctest.h>

#include "gawqed/config.hpp"
#include "gawqed/run.hpp"
#include "gawqed/scattering.hpp"

#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace gawqed;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir()
{
    static std::atomic<int> counter{0};
    fs::path p = fs::temp_directory_path() /
                 ("gawqed_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(p);
    return p;
}

void write_file(const fs::path& p, const std::string& s)
{
    std::ofstream(p) << s;
}

std::string read_file(const fs::path& p)
{
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Proc {
    int code;
    std::string out, err;
};

Proc cli(const std::string& args, const std::string& env = "")
{
    const fs::path d = scratch_dir();
    const std::string cmd = env + " '" + std::string(GAWQED_CLI_PATH) + "' " + args + " > '" + (d / "out").string() +
                            "' 2> '" + (d / "err").string() + "'";
    const int st = std::system(cmd.c_str());
    Proc p{WIFEXITED(st) ? WEXITSTATUS(st) : -1, read_file(d / "out"), read_file(d / "err")};
    fs::remove_all(d);
    return p;
}

std::vector<std::vector<double>> parse_csv(const std::string& text, std::vector<std::string>& header)
{
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    header.clear();
    {
        std::istringstream h(line);
        std::string cell;
        while (std::getline(h, cell, ',')) header.push_back(cell);
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream l(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(l, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

const char* separate_shortcut = R"({"symmetric": {"topology": "separate", "phi": 0.15707963267948966}})";

}  // namespace

TEST_CASE("expand_symmetric orderings")
{
    const double p = 0.7;
    const auto s = expand_symmetric({Topology::Separate, p, 1.0});
    CHECK(s.atom_a.points[1].phase == doctest::Approx(p));
    CHECK(s.atom_b.points[0].phase == doctest::Approx(2 * p));
    const auto b = expand_symmetric({Topology::Braided, p, 2.0});
    CHECK(b.atom_a.points[1].phase == doctest::Approx(2 * p));
    CHECK(b.atom_b.points[0].phase == doctest::Approx(p));
    CHECK(b.atom_b.points[1].rate == 2.0);
    const auto n = expand_symmetric({Topology::Nested, p, 1.0}, 0.3);
    CHECK(n.atom_a.points[1].phase == doctest::Approx(3 * p));
    CHECK(n.atom_b.points[0].phase == doctest::Approx(p));
    CHECK(n.atom_b.points[1].phase == doctest::Approx(2 * p));
    CHECK(n.delta_ab == 0.3);
    CHECK(n.atom_a.points[0].phase == 0);
}

TEST_CASE("config parsing")
{
    const auto c = parse_config(R"({
      "atoms": [{"points": [{"phase": 0, "rate": 1}, {"phase": 3.14, "rate": 1}]},
                {"points": [{"phase": 0.7, "rate": 10}, {"phase": 2.3, "rate": 10}]}],
      "delta_ab": -0.5,
      "drive": {"alpha_sq": 0.04, "detuning": 0.1}
    })");
    CHECK(classify_topology(c.system) == Topology::Nested);
    CHECK(c.system.delta_ab == -0.5);
    REQUIRE(c.drive);
    CHECK(c.drive->amplitude_sq == 0.04);
    CHECK(!c.symmetric);

    const auto s = parse_config(R"({"symmetric": {"topology": "braided", "phi": 1.0, "gamma": 2}, "delta_ab": 1})");
    CHECK(classify_topology(s.system) == Topology::Braided);
    CHECK(s.system.rate_unit == 2);
    CHECK(s.system.atom_b.points[1].phase == doctest::Approx(3));
}

TEST_CASE("schema violations")
{
    const char* bad[] = {
        "not json",
        "[]",
        "{}",
        R"({"atoms": [{"points": [{"phase": 0, "rate": 1}, {"phase": 1, "rate": 1}]}]})",
        R"({"atoms": [{"points": [{"phase": 0, "rate": 1}]}, {"points": [{"phase": 1, "rate": 1}, {"phase": 2, "rate": 1}]}]})",
        R"({"atoms": [{"points": [{"phase": 0, "rate": 1}, {"phase": 1, "rate": 1}]}, {"points": [{"phase": 2, "rate": 1}, {"phase": 3, "rate": -1}]}]})",
        R"({"atoms": [{"points": [{"phase": 1, "rate": 1}, {"phase": 2, "rate": 1}]}, {"points": [{"phase": 0, "rate": 1}, {"phase": 3, "rate": 1}]}]})",
        R"({"atoms": [{"points": [{"phase": 0, "rate": 1}, {"phase": 1, "rate": 1}]}, {"points": [{"phase": 2, "rate": 1}, {"phase": 3, "rate": 1}]}], "extra": 1})",
        R"({"atoms": [{"points": [{"phase": "0", "rate": 1}, {"phase": 1, "rate": 1}]}, {"points": [{"phase": 2, "rate": 1}, {"phase": 3, "rate": 1}]}]})",
        R"({"symmetric": {"topology": "twisted", "phi": 1}})",
        R"({"symmetric": {"topology": "nested", "phi": -1}})",
        R"({"symmetric": {"topology": "nested", "phi": 1, "gamma": 0}})",
        R"({"symmetric": {"topology": "nested", "phi": 1}, "drive": {"alpha_sq": -1}})",
        R"({"symmetric": {"topology": "separate", "phi": 1},
            "atoms": [{"points": [{"phase": 0, "rate": 1}, {"phase": 1, "rate": 1}]}, {"points": [{"phase": 2, "rate": 1}, {"phase": 4, "rate": 1}]}]})",
    };
    for (const char* text : bad) CHECK_THROWS_AS(parse_config(text), SchemaError);

    CHECK_THROWS_AS(parse_sweep("delta_a:1:0:10"), SchemaError);
    CHECK_THROWS_AS(parse_sweep("delta_a:0:1:1"), SchemaError);
    CHECK_THROWS_AS(parse_sweep("omega:0:1:10"), SchemaError);
    CHECK_THROWS_AS(parse_sweep("delta_a:0:x:10"), SchemaError);
    CHECK_THROWS_AS(command_from_string("plot"), SchemaError);
    const auto sw = parse_sweep("phi:0:3.5:8");
    CHECK(sw.variable == "phi");
    CHECK(sw.points == 8);
}

TEST_CASE("round trip is bit-identical")
{
    const fs::path d = scratch_dir();
    const auto c = parse_config(R"({
      "atoms": [{"points": [{"phase": 0.1, "rate": 1.0000000000000002}, {"phase": 3.3, "rate": 0.3}]},
                {"points": [{"phase": 1.7, "rate": 2}, {"phase": 2.9000000000000004, "rate": 1}]}],
      "delta_ab": 0.123456789012345678,
      "drive": {"alpha_sq": 0.01, "detuning": -0.7}
    })");
    save_config(c, (d / "a.json").string());
    const auto back = load_config((d / "a.json").string());
    CHECK(dump_config(back) == dump_config(c));
    RunSpec spec;
    spec.sweep = SweepSpec{"delta_a", -3, 3, 41};
    for (Command cmd : {Command::Spectrum, Command::MasterSweep}) {
        spec.command = cmd;
        CHECK(run_to_string(spec, &c) == run_to_string(spec, &back));
    }
    spec.sweep.reset();
    spec.command = Command::Characteristics;
    CHECK(run_to_string(spec, &c) == run_to_string(spec, &back));
    fs::remove_all(d);
}

TEST_CASE("job count does not change the output")
{
    const auto c = parse_config(R"({"symmetric": {"topology": "nested", "phi": 0.9}, "delta_ab": 0.2,
                                    "drive": {"alpha_sq": 0.02}})");
    RunSpec spec;
    spec.sweep = SweepSpec{"delta_a", -4, 4, 301};
    for (Command cmd : {Command::Spectrum, Command::MasterSweep}) {
        spec.command = cmd;
        spec.jobs = 1;
        const auto one = run_to_string(spec, &c);
        spec.jobs = 4;
        CHECK(run_to_string(spec, &c) == one);
    }
    spec.command = Command::Fano;
    spec.sweep = SweepSpec{"phi", 0.01, 6.2, 97};
    spec.jobs = 1;
    const auto one = run_to_string(spec, &c);
    spec.jobs = 3;
    CHECK(run_to_string(spec, &c) == one);
}

TEST_CASE("parallel_for keeps the lowest-index exception")
{
    try {
        parallel_for(100, 4, [](std::size_t i) {
            if (i == 17 || i == 80) throw NumericalError("at " + std::to_string(i));
        });
        FAIL("no exception");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()) == "at 17");
    }
}

TEST_CASE("spectrum minimum matches the analytic locus")
{
    const auto c = parse_config(separate_shortcut);
    RunSpec spec;
    spec.command = Command::Spectrum;
    spec.sweep = SweepSpec{"delta_a", -6, 6, 2001};
    std::vector<std::string> header;
    const auto rows = parse_csv(run_to_string(spec, &c), header);
    REQUIRE(header == std::vector<std::string>{"delta_a", "re_t", "im_t", "re_r", "im_r", "T", "R"});
    REQUIRE(rows.size() == 2001);
    std::size_t k = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i][6] < rows[k][6]) k = i;
    const auto loci = peak_minimum_loci(Topology::Separate, 0.05 * pi);
    REQUIRE(loci.minimum);
    CHECK(std::abs(rows[k][0] - *loci.minimum) <= 0.006);
}

TEST_CASE("eit-classify verdict")
{
    const auto c = parse_config(R"({"symmetric": {"topology": "separate", "phi": 1.5707963267948966}, "delta_ab": 1})");
    RunSpec spec;
    spec.command = Command::EitClassify;
    const auto j = nlohmann::json::parse(run_to_string(spec, &c));
    CHECK(j["scheme"] == "CollectiveSA");
    CHECK(j["regime"] == "EIT");
    CHECK(j["transparency_delta_a"].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("oracle-check report")
{
    RunSpec spec;
    spec.command = Command::OracleCheck;
    spec.samples = 100;
    const auto text = run_to_string(spec, nullptr);
    const auto j = nlohmann::json::parse(text);
    CHECK(j["samples"] == 100);
    CHECK(j["max_dev_t"].get<double>() < 1e-10);
    CHECK(j["max_dev_r"].get<double>() < 1e-10);
    CHECK(j["pass"] == true);
    CHECK(run_to_string(spec, nullptr) == text);
}

TEST_CASE("end to end through the executable")
{
    const fs::path d = scratch_dir();
    write_file(d / "sep.json", separate_shortcut);
    write_file(d / "bad.json", R"({"atoms": []})");
    write_file(d / "dfi.json",
               R"({"symmetric": {"topology": "braided", "phi": 1.5707963267948966}, "drive": {"alpha_sq": 0.01}})");

    SUBCASE("success writes a headed CSV file")
    {
        const auto p = cli("--config '" + (d / "sep.json").string() + "' --command spectrum --sweep delta_a:-1:1:5 --out '" +
                           (d / "o.csv").string() + "'");
        CHECK(p.code == 0);
        const auto text = read_file(d / "o.csv");
        CHECK(text.rfind("delta_a,re_t,im_t,re_r,im_r,T,R\n", 0) == 0);
    }
    SUBCASE("schema error exits 2")
    {
        const auto p = cli("--config '" + (d / "bad.json").string() + "' --command spectrum");
        CHECK(p.code == 2);
        const auto j = nlohmann::json::parse(p.err);
        CHECK(j["error"]["exit_code"] == 2);
        CHECK(cli("--command nope").code == 2);
        CHECK(cli("--config x --command spectrum --sweep phi:1:0:3").code == 2);
    }
    SUBCASE("numerical failure exits 3 with the module message")
    {
        const auto p = cli("--config '" + (d / "dfi.json").string() + "' --command master-sweep --sweep delta_a:-1:1:3");
        CHECK(p.code == 3);
        const auto j = nlohmann::json::parse(p.err);
        CHECK(j["error"]["exit_code"] == 3);
        CHECK(!j["error"]["message"].get<std::string>().empty());
    }
    SUBCASE("I/O failure exits 4")
    {
        CHECK(cli("--config '" + (d / "missing.json").string() + "' --command spectrum").code == 4);
        CHECK(cli("--config '" + (d / "sep.json").string() + "' --command spectrum --out /nonexistent/dir/x.csv").code == 4);
    }
    SUBCASE("oracle tolerance from the environment")
    {
        const auto p = cli("--command oracle-check --samples 20", "GAWQED_TOL=1e-30");
        CHECK(p.code == 3);
        CHECK(cli("--command oracle-check --samples 20", "GAWQED_TOL=abc").code == 2);
        const auto ok = cli("--command oracle-check --samples 20 --seed 5");
        CHECK(ok.code == 0);
        CHECK(nlohmann::json::parse(ok.out)["pass"] == true);
    }
    fs::remove_all(d);
}
