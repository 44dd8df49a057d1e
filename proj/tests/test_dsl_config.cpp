#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>

#include "acharm/catalog.hpp"
#include "acharm/config.hpp"

using namespace acharm;

namespace {

const char* kSasakianConfig = R"JSON({
  "name": "sasakian_from_config",
  "dim": 3,
  "coordinates": ["x", "y", "z"],
  "domain": {"x": [-0.8, 0.8], "y": [-0.8, 0.8], "z": [-0.8, 0.8]},
  "metric": [["(y*y+1)/4", "0", "-y/4"],
             ["0", "1/4", "0"],
             ["-y/4", "0", "1/4"]],
  "xi": ["0", "0", "2"],
  "phi": [["0", "1", "0"],
          ["-1", "0", "0"],
          ["0", "y", "0"]]
})JSON";

}  // namespace

TEST_CASE("config reproduces the built-in Sasakian entry") {
    const auto cfg = parse_structure_config(kSasakianConfig);
    const auto s = load_structure_config(cfg);
    const auto builtin = sasakian_r3();
    const FDConfig fd;
    const auto pts = sample_points(builtin.chart, 20, 42, fd);
    for (const auto& p : pts) {
        CHECK(max_abs(metric_at(s.chart, p) - metric_at(builtin.chart, p)) < 1e-12);
        CHECK(max_abs(vec_sub(s.xi.eval(p), builtin.xi.eval(p))) < 1e-12);
        CHECK(max_abs(vec_sub(s.eta.eval(p), builtin.eta.eval(p))) < 1e-12);
        CHECK(max_abs(vec_sub(s.phi.eval(p), builtin.phi.eval(p))) < 1e-12);
    }
}

TEST_CASE("the shipped config file loads") {
    const char* dir = std::getenv("ACHARM_CONFIG_DIR");
    REQUIRE(dir != nullptr);
    const auto s = load_structure_file(std::string(dir) + "/sasakian_r3.json");
    CHECK(s.chart.dim == 3);
}

TEST_CASE("malformed configs raise ConfigError") {
    CHECK_THROWS_AS(parse_structure_config("not json at all"), ConfigError);
    CHECK_THROWS_AS(parse_structure_config("{}"), ConfigError);
    CHECK_THROWS_AS(parse_structure_config(R"({"dim": 4})"), ConfigError);  // even dim

    // wrong metric shape
    CHECK_THROWS_AS(parse_structure_config(R"({
        "dim": 3, "coordinates": ["x","y","z"],
        "domain": {"x": [-1,1], "y": [-1,1], "z": [-1,1]},
        "metric": [["1","0"],["0","1"]],
        "xi": ["0","0","1"],
        "phi": [["0","0","0"],["0","0","0"],["0","0","0"]]
    })"),
                    ConfigError);

    // non-symmetric metric expression matrix
    std::string cfg = kSasakianConfig;
    const auto pos = cfg.find("\"-y/4\", \"0\", \"1/4\"");
    REQUIRE(pos != std::string::npos);
    cfg.replace(pos, 19, "\"y/4\", \"0\", \"1/4\"");
    CHECK_THROWS_AS(load_structure_config(parse_structure_config(cfg)), ConfigError);

    // unparseable expression
    std::string cfg2 = kSasakianConfig;
    const auto pos2 = cfg2.find("\"(y*y+1)/4\"");
    REQUIRE(pos2 != std::string::npos);
    cfg2.replace(pos2, 11, "\"(y*y+1)/\"");
    CHECK_THROWS_AS(load_structure_config(parse_structure_config(cfg2)), ConfigError);

    // unbound variable
    std::string cfg3 = kSasakianConfig;
    const auto pos3 = cfg3.find("\"(y*y+1)/4\"");
    cfg3.replace(pos3, 11, "\"(q*q+1)/4\"");
    CHECK_THROWS_AS(load_structure_config(parse_structure_config(cfg3)), ConfigError);

    CHECK_THROWS_AS(load_structure_file("/nonexistent/path.json"), ConfigError);
}

TEST_CASE("config axiom gate") {
    // phi scaled by 2 violates phi^2 = -I + eta (x) xi at load time
    std::string cfg = kSasakianConfig;
    const auto pos = cfg.find(R"(["0", "1", "0"])");
    REQUIRE(pos != std::string::npos);
    cfg.replace(pos, 15, R"(["0", "2", "0"])");
    CHECK_THROWS_AS(load_structure_config(parse_structure_config(cfg)), AxiomViolation);
}

TEST_CASE("config parameters and fd overrides") {
    const char* text = R"JSON({
      "name": "scaled_flat",
      "dim": 3,
      "coordinates": ["x", "y", "z"],
      "domain": {"x": [-1, 1], "y": [-1, 1], "z": [-1, 1]},
      "parameters": {"a": 2.0},
      "metric": [["a*a", "0", "0"], ["0", "a*a", "0"], ["0", "0", "1"]],
      "xi": ["0", "0", "1"],
      "phi": [["0", "-1", "0"], ["1", "0", "0"], ["0", "0", "0"]],
      "fd": {"step": 5e-5, "order": 4}
    })JSON";
    const auto cfg = parse_structure_config(text);
    CHECK(cfg.has_fd_overrides);
    CHECK(cfg.fd.step == 5e-5);
    CHECK(cfg.fd.order == 4);
    const auto s = load_structure_config(cfg);
    const Mat g = metric_at(s.chart, {0.0, 0.0, 0.0});
    CHECK(g(0, 0) == 4.0);
    // domain predicate honors the declared bounds
    CHECK(s.chart.domain({0.5, 0.5, 0.5}));
    CHECK_FALSE(s.chart.domain({1.5, 0.0, 0.0}));
}
