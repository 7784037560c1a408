#include "soilanom/config.hpp"

#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace soilanom {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

int metal_index(const std::string& name) {
    for (std::size_t j = 0; j < kNumMetals; ++j)
        if (name == kMetals[j]) return static_cast<int>(j);
    return -1;
}

struct Field {
    std::function<void(PipelineConfig&, const std::string&)> set;
    std::function<std::string(const PipelineConfig&)> get;
};

template <class T>
T parse_as(const std::string& v);

template <>
double parse_as<double>(const std::string& v) { return std::stod(v); }
template <>
int parse_as<int>(const std::string& v) { return std::stoi(v); }
template <>
std::uint64_t parse_as<std::uint64_t>(const std::string& v) { return std::stoull(v); }
template <>
bool parse_as<bool>(const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::runtime_error("invalid boolean: " + v);
}
template <>
std::string parse_as<std::string>(const std::string& v) { return v; }

const std::map<std::string, Field>& registry() {
    static const std::map<std::string, Field> fields = [] {
        std::map<std::string, Field> f;
        auto add = [&](const std::string& key, auto member_ptr_fn) {
            f[key] = Field{
                [member_ptr_fn](PipelineConfig& c, const std::string& v) {
                    auto& ref = member_ptr_fn(c);
                    ref = parse_as<std::decay_t<decltype(ref)>>(v);
                },
                [member_ptr_fn](const PipelineConfig& c) {
                    auto& ref = member_ptr_fn(const_cast<PipelineConfig&>(c));
                    using T = std::decay_t<decltype(ref)>;
                    if constexpr (std::is_same_v<T, double>) return fmt(ref);
                    else if constexpr (std::is_same_v<T, bool>) return std::string(ref ? "true" : "false");
                    else if constexpr (std::is_same_v<T, std::string>) return ref;
                    else return std::to_string(ref);
                }};
        };
        add("input", [](PipelineConfig& c) -> std::string& { return c.input_path; });
        add("output_dir", [](PipelineConfig& c) -> std::string& { return c.output_dir; });
        add("iforest.n_trees", [](PipelineConfig& c) -> int& { return c.iforest.n_trees; });
        add("iforest.contamination",
            [](PipelineConfig& c) -> double& { return c.iforest.contamination; });
        add("iforest.subsample", [](PipelineConfig& c) -> int& { return c.iforest.subsample; });
        add("iforest.seed", [](PipelineConfig& c) -> std::uint64_t& { return c.iforest.seed; });
        add("dbscan.eps", [](PipelineConfig& c) -> double& { return c.dbscan.eps; });
        add("dbscan.min_samples",
            [](PipelineConfig& c) -> int& { return c.dbscan.min_samples; });
        add("pca.k", [](PipelineConfig& c) -> int& { return c.pca.k; });
        add("pca.quantile", [](PipelineConfig& c) -> double& { return c.pca.quantile; });
        add("consensus.vote_threshold",
            [](PipelineConfig& c) -> int& { return c.vote_threshold; });
        add("risk.recompute", [](PipelineConfig& c) -> bool& { return c.recompute_risk; });
        add("risk.pef", [](PipelineConfig& c) -> double& { return c.exposure.pef; });

        auto add_receptor = [&](const std::string& prefix, auto select) {
            add(prefix + ".ing_rate",
                [select](PipelineConfig& c) -> double& { return select(c).ing_rate; });
            add(prefix + ".inh_rate",
                [select](PipelineConfig& c) -> double& { return select(c).inh_rate; });
            add(prefix + ".skin_area",
                [select](PipelineConfig& c) -> double& { return select(c).skin_area; });
            add(prefix + ".adherence",
                [select](PipelineConfig& c) -> double& { return select(c).adherence; });
            add(prefix + ".exposure_freq",
                [select](PipelineConfig& c) -> double& { return select(c).exposure_freq; });
            add(prefix + ".exposure_dur",
                [select](PipelineConfig& c) -> double& { return select(c).exposure_dur; });
            add(prefix + ".body_weight",
                [select](PipelineConfig& c) -> double& { return select(c).body_weight; });
            add(prefix + ".at_carcinogenic",
                [select](PipelineConfig& c) -> double& { return select(c).at_carcinogenic; });
        };
        add_receptor("risk.adult",
                     [](PipelineConfig& c) -> ReceptorParams& { return c.exposure.adult; });
        add_receptor("risk.child",
                     [](PipelineConfig& c) -> ReceptorParams& { return c.exposure.child; });

        for (std::size_t j = 0; j < kNumMetals; ++j) {
            std::string metal = kMetals[j];
            add("risk.abs." + metal,
                [j](PipelineConfig& c) -> double& { return c.exposure.abs_dermal[j]; });
            add("risk.tox." + metal + ".rfd_ing",
                [j](PipelineConfig& c) -> double& { return c.toxicity.metals[j].rfd_ing; });
            add("risk.tox." + metal + ".rfd_derm",
                [j](PipelineConfig& c) -> double& { return c.toxicity.metals[j].rfd_derm; });
            add("risk.tox." + metal + ".rfd_inh",
                [j](PipelineConfig& c) -> double& { return c.toxicity.metals[j].rfd_inh; });
            add("risk.tox." + metal + ".carcinogen",
                [j](PipelineConfig& c) -> bool& { return c.toxicity.metals[j].carcinogen; });
            add("risk.tox." + metal + ".sf_ing",
                [j](PipelineConfig& c) -> double& { return c.toxicity.metals[j].sf_ing; });
            add("risk.tox." + metal + ".sf_derm",
                [j](PipelineConfig& c) -> double& { return c.toxicity.metals[j].sf_derm; });
            add("risk.tox." + metal + ".sf_inh",
                [j](PipelineConfig& c) -> double& { return c.toxicity.metals[j].sf_inh; });
        }
        return f;
    }();
    return fields;
}

}  // namespace

void PipelineConfig::apply(const std::string& key, const std::string& value) {
    auto it = registry().find(key);
    if (it == registry().end()) throw std::runtime_error("unknown config key: " + key);
    try {
        it->second.set(*this, value);
    } catch (const std::exception& e) {
        throw std::runtime_error("config key " + key + ": " + e.what());
    }
}

std::map<std::string, std::string> PipelineConfig::flatten() const {
    std::map<std::string, std::string> out;
    for (const auto& [key, field] : registry()) out[key] = field.get(*this);
    return out;
}

std::string PipelineConfig::digest() const {
    std::uint64_t h = 14695981039346656037ull;  // FNV-1a
    auto mix = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    for (const auto& [k, v] : flatten()) {
        mix(k);
        mix("=");
        mix(v);
        mix(";");
    }
    std::ostringstream ss;
    ss << std::hex << h;
    return ss.str();
}

void load_config_file(PipelineConfig& cfg, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected 'key = value'");
        cfg.apply(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

}  // namespace soilanom
