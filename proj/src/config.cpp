#include "svedefog/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace svedefog {

namespace {

double parse_double(const std::string& key, const std::string& value) {
    size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != value.size())
        throw std::invalid_argument("config: bad numeric value '" + value + "' for key '" +
                                    key + "'");
    return v;
}

long parse_int(const std::string& key, const std::string& value) {
    size_t used = 0;
    long v = 0;
    try {
        v = std::stol(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != value.size())
        throw std::invalid_argument("config: bad integer value '" + value + "' for key '" +
                                    key + "'");
    return v;
}

uint64_t parse_u64(const std::string& key, const std::string& value) {
    size_t used = 0;
    uint64_t v = 0;
    try {
        v = std::stoull(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != value.size())
        throw std::invalid_argument("config: bad integer value '" + value + "' for key '" +
                                    key + "'");
    return v;
}

std::array<double, 4> parse_quad(const std::string& key, const std::string& value) {
    std::array<double, 4> out{};
    std::istringstream ss(value);
    std::string tok;
    int i = 0;
    while (std::getline(ss, tok, ',')) {
        if (i >= 4)
            throw std::invalid_argument("config: key '" + key + "' takes 4 comma-separated values");
        out[i++] = parse_double(key, tok);
    }
    if (i != 4)
        throw std::invalid_argument("config: key '" + key + "' takes 4 comma-separated values");
    return out;
}

std::string quad_to_text(const std::array<double, 4>& q) {
    std::ostringstream ss;
    ss.precision(17);
    ss << q[0] << "," << q[1] << "," << q[2] << "," << q[3];
    return ss.str();
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

}  // namespace

AttenuatorPattern Config::attenuator() const {
    AttenuatorPattern p;
    p.transmittances = pattern;
    p.validate();
    return p;
}

SensorModel Config::sensor() const {
    SensorModel m;
    m.bit_depth = bit_depth;
    m.read_noise_sigma = noise_sigma;
    m.prnu_sigma = prnu_sigma;
    m.seed = seed;
    m.validate();
    return m;
}

HazeParams Config::haze_params() const {
    HazeParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.gamma = gamma;
    p.sigma = sigma;
    p.c_bi = c_bi;
    p.c_wc = c_wc;
    p.c_cf = c_cf;
    p.c_v = c_v;
    p.eps_bright = eps_bright;
    p.patch_radius = patch_radius;
    p.validate();
    return p;
}

FusionConfig Config::fusion() const {
    FusionConfig f;
    f.sigma_g = sigma_g;
    f.hist_bins = hist_bins;
    if (recombine == "separate")
        f.recombine = RecombineMode::separate_then_multiply;
    else if (recombine == "literal")
        f.recombine = RecombineMode::literal_per_band;
    else
        throw std::invalid_argument("config: recombine must be 'separate' or 'literal', got '" +
                                    recombine + "'");
    if (depth_override > 0) f.depth_override = depth_override;
    f.validate();
    return f;
}

void config_set(Config& cfg, const std::string& key, const std::string& value) {
    if (key == "pattern") cfg.pattern = parse_quad(key, value);
    else if (key == "bit_depth") cfg.bit_depth = static_cast<int>(parse_int(key, value));
    else if (key == "noise_sigma") cfg.noise_sigma = parse_double(key, value);
    else if (key == "prnu_sigma") cfg.prnu_sigma = parse_double(key, value);
    else if (key == "seed") cfg.seed = parse_u64(key, value);
    else if (key == "interp_gain") cfg.interp_gain = parse_double(key, value);
    else if (key == "alpha") cfg.alpha = parse_double(key, value);
    else if (key == "beta") cfg.beta = parse_double(key, value);
    else if (key == "gamma") cfg.gamma = parse_double(key, value);
    else if (key == "sigma") cfg.sigma = parse_double(key, value);
    else if (key == "c_bi") cfg.c_bi = parse_double(key, value);
    else if (key == "c_wc") cfg.c_wc = parse_double(key, value);
    else if (key == "c_cf") cfg.c_cf = parse_double(key, value);
    else if (key == "c_v") cfg.c_v = parse_double(key, value);
    else if (key == "eps_bright") cfg.eps_bright = parse_double(key, value);
    else if (key == "patch_radius") cfg.patch_radius = static_cast<int>(parse_int(key, value));
    else if (key == "regions") cfg.regions = static_cast<int>(parse_int(key, value));
    else if (key == "zeta") cfg.zeta = parse_quad(key, value);
    else if (key == "wgif_radius") cfg.wgif_radius = static_cast<int>(parse_int(key, value));
    else if (key == "wgif_reg") cfg.wgif_reg = parse_double(key, value);
    else if (key == "detail_gain") cfg.detail_gain = parse_double(key, value);
    else if (key == "sigma_g") cfg.sigma_g = parse_double(key, value);
    else if (key == "hist_bins") cfg.hist_bins = static_cast<int>(parse_int(key, value));
    else if (key == "recombine") cfg.recombine = value;
    else if (key == "depth_override") cfg.depth_override = static_cast<int>(parse_int(key, value));
    else
        throw std::invalid_argument("config: unknown key '" + key + "'");
}

Config load_config(const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& overrides) {
    Config cfg;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("config: cannot open " + path);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const size_t hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            const size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("config: parse error at " + path + ":" +
                                            std::to_string(lineno) + ": expected key=value");
            try {
                config_set(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
            } catch (const std::invalid_argument& e) {
                throw std::invalid_argument(std::string(e.what()) + " (at " + path + ":" +
                                            std::to_string(lineno) + ")");
            }
        }
    }
    for (const auto& [key, value] : overrides) config_set(cfg, key, value);
    return cfg;
}

std::string config_to_text(const Config& cfg) {
    std::ostringstream ss;
    ss.precision(17);
    ss << "pattern=" << quad_to_text(cfg.pattern) << "\n";
    ss << "bit_depth=" << cfg.bit_depth << "\n";
    ss << "noise_sigma=" << cfg.noise_sigma << "\n";
    ss << "prnu_sigma=" << cfg.prnu_sigma << "\n";
    ss << "seed=" << cfg.seed << "\n";
    ss << "interp_gain=" << cfg.interp_gain << "\n";
    ss << "alpha=" << cfg.alpha << "\n";
    ss << "beta=" << cfg.beta << "\n";
    ss << "gamma=" << cfg.gamma << "\n";
    ss << "sigma=" << cfg.sigma << "\n";
    ss << "c_bi=" << cfg.c_bi << "\n";
    ss << "c_wc=" << cfg.c_wc << "\n";
    ss << "c_cf=" << cfg.c_cf << "\n";
    ss << "c_v=" << cfg.c_v << "\n";
    ss << "eps_bright=" << cfg.eps_bright << "\n";
    ss << "patch_radius=" << cfg.patch_radius << "\n";
    ss << "regions=" << cfg.regions << "\n";
    ss << "zeta=" << quad_to_text(cfg.zeta) << "\n";
    ss << "wgif_radius=" << cfg.wgif_radius << "\n";
    ss << "wgif_reg=" << cfg.wgif_reg << "\n";
    ss << "detail_gain=" << cfg.detail_gain << "\n";
    ss << "sigma_g=" << cfg.sigma_g << "\n";
    ss << "hist_bins=" << cfg.hist_bins << "\n";
    ss << "recombine=" << cfg.recombine << "\n";
    ss << "depth_override=" << cfg.depth_override << "\n";
    return ss.str();
}

void write_config_sidecar(const std::string& path, const Config& cfg) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("config: cannot write sidecar " + path);
    out << "# effective configuration\n" << config_to_text(cfg);
}

}  // namespace svedefog
