#include <cdlab/experiments.hpp>

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cdlab::experiments;
namespace fs = std::filesystem;

namespace {
std::string field_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}
}  // namespace

TEST_SUITE("cli") {

TEST_CASE("experiment catalogue") {
    const auto names = experiment_names();
    CHECK(names.size() == 9);
    for (const auto& n : names) {
        const auto c = default_config(n);
        CHECK(c.experiment == n);
        CHECK(c.tolerance > 0.0);
    }
    CHECK_THROWS_AS(default_config("nope"), ConfigError);
}

TEST_CASE("config parsing") {
    const auto c = parse_config(R"({"experiment": "bulk", "measure": {"name": "chebyshev"}, "n_values": [20, 40],
                                    "grid": {"half_width": 1.5, "points_per_axis": 7}, "tolerance": 0.1, "seed": 4,
                                    "pins": {"eta": 0.3183}})");
    CHECK(c.measure == "chebyshev");
    CHECK(c.n_values == std::vector<double>{20, 40});
    CHECK(c.grid.points_per_axis == 7);
    CHECK(c.tolerance == 0.1);
    CHECK(c.seed == 4);
    CHECK(c.pins.eta.value() == 0.3183);
    CHECK(!c.pins.beta);
    const auto d = parse_config(R"({"experiment": "hard_edge"})");
    CHECK(d.measure == "power_hard_edge");
    CHECK(d.measure_params.at("beta") == 1.5);
}

TEST_CASE("config validation names the field") {
    CHECK(field_of(R"({"experiment": "bulk", "tolerance": -0.1})") == "tolerance");
    CHECK(field_of(R"({"experiment": "bulk", "tolerance": "big"})") == "tolerance");
    CHECK(field_of(R"({"tolerance": 0.1})") == "experiment");
    CHECK(field_of(R"({"experiment": "warp"})") == "experiment");
    CHECK(field_of(R"({"experiment": "bulk", "grid": {"points_per_axis": 2}})") == "grid.points_per_axis");
    CHECK(field_of(R"({"experiment": "bulk", "grid": {"points_per_axis": 8}})") == "grid.points_per_axis");
    CHECK(field_of(R"({"experiment": "bulk", "grid": {"half_width": 0}})") == "grid.half_width");
    CHECK(field_of(R"({"experiment": "bulk", "n_values": [100, 50]})") == "n_values[1]");
    CHECK(field_of(R"({"experiment": "bulk", "n_values": [10.5]})") == "n_values[0]");
    CHECK(field_of(R"({"experiment": "bulk", "colour": 1})") == "colour");
    CHECK(field_of(R"({"experiment": "bulk", "measure": {"name": "legendre", "params": {"beta": 2}}})") == "measure.params");
    CHECK(field_of(R"({"experiment": "bulk", "measure": "circle_lebesgue"})") == "measure.name");
    CHECK(field_of(R"({"experiment": "bulk", "seed": -3})") == "seed");
    CHECK(field_of(R"({"experiment": "bulk", "pins": {"eta": -1}})") == "pins.eta");
    CHECK(field_of(R"({"experiment": "schrodinger", "xi": -1})") == "xi");
    CHECK(field_of("{not json") == "<document>");
}

TEST_CASE("identities experiment aggregates every suite") {
    const auto r = run_experiment(default_config("identities"));
    CHECK(r.passed);
    CHECK(r.lines.size() >= 20);
    const auto c = run_experiment(default_config("canonical_identities"));
    CHECK(c.passed);
    for (const auto& l : c.lines) CHECK(l.result == "canonical identity");
}

TEST_CASE("bulk run and byte-identical artifacts") {
    auto c = parse_config(R"({"experiment": "bulk", "n_values": [40, 80], "grid": {"points_per_axis": 9}})");
    const auto a = run_experiment(c, 1);
    const auto b = run_experiment(c, 3);
    CHECK(a.passed);
    const fs::path da = fs::temp_directory_path() / "cdlab_test_a", db = fs::temp_directory_path() / "cdlab_test_b";
    fs::remove_all(da);
    fs::remove_all(db);
    write_artifacts(a, da);
    write_artifacts(b, db);
    for (const auto* f : {"kernel_40.csv", "kernel_80.csv", "zeros.csv", "report.txt", "report.json"}) {
        REQUIRE(fs::exists(da / f));
        CHECK(slurp(da / f) == slurp(db / f));
    }
    const auto csv = slurp(da / "kernel_40.csv");
    CHECK(csv.rfind("re_z,im_z,re_w,im_w,re_K,im_K\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 81);
    CHECK(slurp(da / "zeros.csv").rfind("n,k,zero,scaled_zero\n", 0) == 0);
    fs::remove_all(da);
    fs::remove_all(db);
}

TEST_CASE("number format round-trips") {
    for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300}) CHECK(std::stod(format_number(x)) == x);
}
}
