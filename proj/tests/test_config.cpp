#include <doctest.h>

#include <string>

#include "camg/config.hpp"

using namespace camg;

TEST_CASE("key=value parsing with comments and dotted keys") {
    const auto cfg = KeyValueConfig::parse(
        "# header\n"
        "mesh.slave.nx = 12   # trailing comment\n"
        "\n"
        "smoother.kind=simplec\n"
        "flag = true\n"
        "list = 1, 2.5 ,3\n",
        "run.cfg");
    CHECK(cfg.get_int("mesh.slave.nx", 0) == 12);
    CHECK(cfg.get_string("smoother.kind", "") == "simplec");
    CHECK(cfg.get_bool("flag", false));
    CHECK(cfg.get_double_list("list", {}) == std::vector<double>{1.0, 2.5, 3.0});
    CHECK(cfg.get_double("absent", 4.5) == 4.5);
    CHECK(cfg.where("smoother.kind") == "run.cfg:4");
    CHECK_NOTHROW(cfg.require_all_used());
}

TEST_CASE("malformed input is reported with its line") {
    try {
        KeyValueConfig::parse("a=1\nnot a pair\n", "bad.cfg");
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("bad.cfg:2") != std::string::npos);
    }
    CHECK_THROWS_AS(KeyValueConfig::parse("a=1\na=2\n"), ConfigError);
    CHECK_THROWS_AS(KeyValueConfig::parse("=3\n"), ConfigError);
}

TEST_CASE("typed lookups reject values of the wrong type") {
    const auto cfg = KeyValueConfig::parse("n = 2.5\nb = maybe\nx = abc\n", "t.cfg");
    CHECK_THROWS_AS(cfg.get_int("n", 0), ConfigError);
    CHECK_THROWS_AS(cfg.get_bool("b", false), ConfigError);
    CHECK_THROWS_AS(cfg.get_double("x", 0.0), ConfigError);
}

TEST_CASE("unused keys are reported") {
    const auto cfg = KeyValueConfig::parse("used = 1\nsmoother.knd = sgs\n");
    cfg.get_int("used", 0);
    try {
        cfg.require_all_used();
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("smoother.knd") != std::string::npos);
    }
}
