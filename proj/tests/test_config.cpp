#include <doctest.h>

#include <stdexcept>

#include <filesystem>
#include <fstream>

#include "svedefog/config.hpp"

using namespace svedefog;
namespace fs = std::filesystem;

namespace {

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path p = fs::temp_directory_path() / name;
    std::ofstream out(p);
    out << text;
    return p;
}

}  // namespace

TEST_CASE("defaults are valid and run-ready") {
    const Config cfg = load_config("");
    CHECK(cfg.pattern == std::array<double, 4>{1.0, 0.55, 0.45, 0.0025});
    CHECK(cfg.alpha + cfg.beta + cfg.gamma + cfg.sigma == doctest::Approx(1.0));
    CHECK_NOTHROW(cfg.attenuator());
    CHECK_NOTHROW(cfg.sensor());
    CHECK_NOTHROW(cfg.haze_params());
    CHECK_NOTHROW(cfg.fusion());
}

TEST_CASE("empty file keeps every default") {
    const fs::path p = write_file("svedefog_empty.cfg", "# nothing but comments\n\n");
    const Config cfg = load_config(p.string());
    CHECK(config_to_text(cfg) == config_to_text(Config{}));
}

TEST_CASE("flag overrides beat file values") {
    const fs::path p = write_file("svedefog_prec.cfg", "sigma_g=0.3\nhist_bins=128\n");
    const Config cfg = load_config(p.string(), {{"sigma_g", "0.1"}});
    CHECK(cfg.sigma_g == 0.1);
    CHECK(cfg.hist_bins == 128);
}

TEST_CASE("unknown keys are rejected by name") {
    const fs::path p = write_file("svedefog_unknown.cfg", "sigma_q=0.3\n");
    CHECK_THROWS_WITH_AS(load_config(p.string()), doctest::Contains("sigma_q"),
                         std::invalid_argument);
    Config cfg;
    CHECK_THROWS_WITH_AS(config_set(cfg, "nope", "1"), doctest::Contains("nope"),
                         std::invalid_argument);
}

TEST_CASE("parse errors carry the line number") {
    const fs::path p = write_file("svedefog_badline.cfg", "sigma_g=0.3\nthis is not kv\n");
    CHECK_THROWS_WITH_AS(load_config(p.string()), doctest::Contains(":2"),
                         std::invalid_argument);
    const fs::path q = write_file("svedefog_badnum.cfg", "\n\nsigma_g=abc\n");
    CHECK_THROWS_WITH_AS(load_config(q.string()), doctest::Contains(":3"),
                         std::invalid_argument);
}

TEST_CASE("echoed sidecar reloads to an identical effective config") {
    Config cfg;
    config_set(cfg, "sigma_g", "0.35");
    config_set(cfg, "zeta", "0.4,0.5,0.6,0.7");
    config_set(cfg, "recombine", "literal");
    config_set(cfg, "pattern", "1,0.6,0.3,0.001");
    const fs::path p = fs::temp_directory_path() / "svedefog_echo.cfg";
    write_config_sidecar(p.string(), cfg);
    const Config back = load_config(p.string());
    CHECK(config_to_text(back) == config_to_text(cfg));
}

TEST_CASE("quad keys enforce arity") {
    Config cfg;
    CHECK_THROWS_AS(config_set(cfg, "pattern", "1,0.5"), std::invalid_argument);
    CHECK_THROWS_AS(config_set(cfg, "zeta", "0.5,0.5,0.5,0.5,0.5"), std::invalid_argument);
}
