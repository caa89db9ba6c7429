#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "doctest.h"
#include "oplog/errors.hpp"
#include "oplog/io.hpp"
#include "oplog/linalg.hpp"

using namespace oplog;

namespace {

bool same_bits(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

double reparse(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

}  // namespace

TEST_CASE("seventeen digits round-trip doubles bit-exactly") {
    for (double v : {1.0 / 3.0, 0.1, 1e-120, 1e100, 6.02214076e23, -2.5e-17, 0.0,
                     -0.0, 3.0, 1.0000000000000002}) {
        CHECK(same_bits(reparse(io::fmt17(v)), v));
    }
}

TEST_CASE("matrix files reproduce every bit") {
    SplitMix64 rng(0x10AD);
    ComplexMatrix m(5);
    for (std::size_t i = 0; i < m.size(); ++i)
        m.data()[i] = cplx(rng.symmetric(), rng.symmetric());
    m(0, 0) *= 1e-120;
    m(1, 1) *= 1e100;
    m(2, 3) = cplx(1.0 / 3.0, -1.0 / 7.0);

    const ComplexMatrix back = io::matrix_from_json_text(io::matrix_to_json(m));
    REQUIRE(back.dim() == 5);
    CHECK(std::memcmp(back.data(), m.data(), m.size() * sizeof(cplx)) == 0);

    io::write_matrix("io_test_matrix.json", m);
    const ComplexMatrix file = io::read_matrix("io_test_matrix.json");
    CHECK(std::memcmp(file.data(), m.data(), m.size() * sizeof(cplx)) == 0);
}

TEST_CASE("matrix files reject malformed input") {
    CHECK_THROWS_AS(io::matrix_from_json_text("{nope"), ConfigError);
    CHECK_THROWS_AS(io::matrix_from_json_text("[1, 2]"), ConfigError);
    CHECK_THROWS_AS(io::matrix_from_json_text(R"({"entries": [0, 0]})"), ConfigError);
    CHECK_THROWS_AS(io::matrix_from_json_text(R"({"dim": 1, "entries": [0, 0], "x": 1})"),
                    ConfigError);
    CHECK_THROWS_AS(io::matrix_from_json_text(R"({"dim": 0, "entries": []})"), ConfigError);
    CHECK_THROWS_AS(io::matrix_from_json_text(R"({"dim": -1, "entries": [0, 0]})"),
                    ConfigError);
    CHECK_THROWS_AS(io::matrix_from_json_text(R"({"dim": 1.5, "entries": [0, 0]})"),
                    ConfigError);
    CHECK_THROWS_AS(io::matrix_from_json_text(R"({"dim": 2, "entries": [1, 2, 3]})"),
                    ConfigError);
    CHECK_THROWS_AS(io::matrix_from_json_text(R"({"dim": 1, "entries": [true, 0]})"),
                    ConfigError);
    CHECK_THROWS_AS(io::matrix_from_json_text(R"({"dim": 1, "entries": [1e999, 0]})"),
                    ConfigError);
}

TEST_CASE("text files round-trip and report missing paths") {
    const std::string body = "line one\nline two\n\ttabbed\n";
    io::write_text_file("io_test_text.txt", body);
    CHECK(io::read_text_file("io_test_text.txt") == body);
    CHECK_THROWS_AS(io::read_text_file("io_test_does_not_exist.txt"), ConfigError);
}

TEST_CASE("field csv bytes are deterministic") {
    SpaceTimeField f(GridAxis{0.0, 2.0, 2}, GridAxis{0.0, 1.0, 2}, Provenance::exact);
    f.at(0, 0) = cplx(1.5, -2.25);
    f.at(0, 1) = cplx(0, 0);
    f.at(1, 0) = cplx(3, 0.0625);
    f.at(1, 1) = cplx(-1, 7);
    io::write_field_csv("io_test_field.csv", f);
    const std::string want =
        "x0,x1,re,im\n"
        "0,0,1.5,-2.25\n"
        "0,0.5,0,0\n"
        "1,0,3,0.0625\n"
        "1,0.5,-1,7\n";
    CHECK(io::read_text_file("io_test_field.csv") == want);
}

TEST_CASE("report csv keeps the given row order") {
    io::write_report_csv("io_test_report.csv", {{"b", "2"}, {"a", "1"}, {"c", "null"}});
    CHECK(io::read_text_file("io_test_report.csv") == "name,value\nb,2\na,1\nc,null\n");
}

TEST_CASE("certificate json carries exactly the five fields") {
    KappaCertificate cert;
    cert.kappa = cplx(2.0, 0.5);
    cert.norm_bound = 1.0;
    cert.contour = Contour{cplx(2.0, 0.5), 1.25, 64};
    cert.spectral_margin = 0.25;
    const nlohmann::json doc = nlohmann::json::parse(io::certificate_to_json(cert));
    REQUIRE(doc.is_object());
    CHECK(doc.size() == 5);
    CHECK(doc["kappa"] == nlohmann::json::array({2.0, 0.5}));
    CHECK(doc["center"] == nlohmann::json::array({2.0, 0.5}));
    CHECK(doc["radius"].get<double>() == 1.25);
    CHECK(doc["nodes"].get<std::size_t>() == 64);
    CHECK(doc["spectral_margin"].get<double>() == 0.25);
}

TEST_CASE("run manifest lists artifacts, residuals, timings") {
    io::ManifestBuilder man;
    man.command = "logrep";
    man.seed = 42;
    man.config_echo = R"({"n": 3})";
    man.add_file("propagator.json");
    man.add_file("report.csv");
    man.add_residual("forward_residual", 0.5);
    man.add_residual("skipped", std::numeric_limits<double>::quiet_NaN());
    man.add_residual("diverged", std::numeric_limits<double>::infinity());
    man.timings.emplace_back("build", 0.125);

    const nlohmann::json doc = nlohmann::json::parse(man.to_json());
    CHECK(doc["version"].is_string());
    CHECK(doc["command"] == "logrep");
    CHECK(doc["seed"] == 42);
    CHECK(doc["config"]["n"] == 3);
    CHECK(doc["files"] == nlohmann::json::array({"propagator.json", "report.csv"}));
    CHECK(doc["residuals"]["forward_residual"] == 0.5);
    CHECK(doc["residuals"]["skipped"].is_null());
    CHECK(doc["residuals"]["diverged"].is_null());
    CHECK(doc["timings_seconds"]["build"] == 0.125);
    CHECK_FALSE(doc.contains("error"));

    man.error = "Overflow";
    const nlohmann::json failed = nlohmann::json::parse(man.to_json());
    CHECK(failed["error"] == "Overflow");

    man.write("io_test_manifest.json");
    CHECK(nlohmann::json::parse(io::read_text_file("io_test_manifest.json"))["error"] ==
          "Overflow");
}

TEST_CASE("svg stays well formed even for degenerate data") {
    io::write_svg_polyline("io_test_plot.svg", {0.0, 1.0, 2.0}, {5.0, 5.0, 5.0});
    const std::string svg = io::read_text_file("io_test_plot.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("viewBox=\"0 0 800 600\"") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("nan") == std::string::npos);
    CHECK(svg.find("inf") == std::string::npos);

    io::write_svg_polyline("io_test_empty.svg", {}, {});
    const std::string empty = io::read_text_file("io_test_empty.svg");
    CHECK(empty.rfind("<svg", 0) == 0);
    CHECK(empty.find("nan") == std::string::npos);

    CHECK_THROWS_AS(io::write_svg_polyline("io_test_bad.svg", {0.0}, {}),
                    std::invalid_argument);
}
