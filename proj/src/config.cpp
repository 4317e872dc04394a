#include "radpipe/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "radpipe/error.hpp"

namespace radpipe {

namespace {

using KeyHandlers = std::map<std::string, std::function<void(const nlohmann::json&)>>;

void apply_section(const nlohmann::json& doc, const std::string& section,
                   const KeyHandlers& handlers) {
    if (!doc.contains(section)) return;
    const nlohmann::json& obj = doc.at(section);
    if (!obj.is_object())
        throw ConfigError("config section \"" + section + "\" must be an object");
    for (const auto& [key, value] : obj.items()) {
        const auto it = handlers.find(key);
        if (it == handlers.end())
            throw ConfigError("unknown config key \"" + section + "." + key + "\"");
        try {
            it->second(value);
        } catch (const nlohmann::json::exception&) {
            throw ConfigError("config key \"" + section + "." + key +
                              "\" has the wrong type");
        }
    }
}

}  // namespace

void PipelineConfig::validate() const {
    if (preprocess.sigma_mm <= 0.0) throw ConfigError("preprocess.sigma_mm must be > 0");
    if (preprocess.truncation <= 0.0) throw ConfigError("preprocess.truncation must be > 0");
    if (roi.expand_fraction < 0.0) throw ConfigError("roi.expand_fraction must be >= 0");
    if (roi.export_size < 1) throw ConfigError("roi.export_size must be >= 1");
    if (radiomics.bin_width <= 0.0) throw ConfigError("radiomics.bin_width must be > 0");
    if (radiomics.glcm_distance < 1) throw ConfigError("radiomics.glcm_distance must be >= 1");
    if (radiomics.gldm_alpha < 0) throw ConfigError("radiomics.gldm_alpha must be >= 0");
    if (radiomics.ngtdm_distance < 1)
        throw ConfigError("radiomics.ngtdm_distance must be >= 1");
    if (radiomics.epsilon <= 0.0) throw ConfigError("radiomics.epsilon must be > 0");
    if (eval.k < 2) throw ConfigError("eval.k must be >= 2");
    try {
        gbdt.validate();
    } catch (const RangeError& e) {
        throw ConfigError(std::string("gbdt.") + e.what());
    }
}

PipelineConfig parse_config(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config root must be a JSON object");

    PipelineConfig cfg;

    static const std::map<std::string, int> kPlanes = {
        {"axial", 2}, {"coronal", 1}, {"sagittal", 0}};

    const std::map<std::string, KeyHandlers> sections = {
        {"preprocess",
         {{"sigma_mm", [&](const auto& v) { cfg.preprocess.sigma_mm = v.template get<double>(); }},
          {"truncation",
           [&](const auto& v) { cfg.preprocess.truncation = v.template get<double>(); }},
          {"reorient",
           [&](const auto& v) { cfg.preprocess.reorient = v.template get<bool>(); }}}},
        {"roi",
         {{"expand_fraction",
           [&](const auto& v) { cfg.roi.expand_fraction = v.template get<double>(); }},
          {"export_size",
           [&](const auto& v) { cfg.roi.export_size = v.template get<std::int64_t>(); }},
          {"export_plane",
           [&](const auto& v) {
               const auto plane = v.template get<std::string>();
               const auto it = kPlanes.find(plane);
               if (it == kPlanes.end())
                   throw ConfigError("roi.export_plane must be axial, coronal, or sagittal");
               cfg.roi.export_axis = it->second;
           }}}},
        {"radiomics",
         {{"bin_width",
           [&](const auto& v) { cfg.radiomics.bin_width = v.template get<double>(); }},
          {"glcm_distance",
           [&](const auto& v) { cfg.radiomics.glcm_distance = v.template get<int>(); }},
          {"gldm_alpha",
           [&](const auto& v) { cfg.radiomics.gldm_alpha = v.template get<int>(); }},
          {"ngtdm_distance",
           [&](const auto& v) { cfg.radiomics.ngtdm_distance = v.template get<int>(); }},
          {"epsilon",
           [&](const auto& v) { cfg.radiomics.epsilon = v.template get<double>(); }}}},
        {"gbdt",
         {{"n_estimators", [&](const auto& v) { cfg.gbdt.n_estimators = v.template get<int>(); }},
          {"max_depth", [&](const auto& v) { cfg.gbdt.max_depth = v.template get<int>(); }},
          {"learning_rate",
           [&](const auto& v) { cfg.gbdt.learning_rate = v.template get<double>(); }},
          {"l2_lambda", [&](const auto& v) { cfg.gbdt.l2_lambda = v.template get<double>(); }},
          {"gamma_min_gain",
           [&](const auto& v) { cfg.gbdt.gamma_min_gain = v.template get<double>(); }},
          {"min_child_weight",
           [&](const auto& v) { cfg.gbdt.min_child_weight = v.template get<double>(); }},
          {"base_score",
           [&](const auto& v) { cfg.gbdt.base_score = v.template get<double>(); }}}},
        {"eval", {{"k", [&](const auto& v) { cfg.eval.k = v.template get<int>(); }}}},
    };

    for (const auto& [section, value] : doc.items())
        if (sections.find(section) == sections.end())
            throw ConfigError("unknown config section \"" + section + "\"");
    for (const auto& [section, handlers] : sections) apply_section(doc, section, handlers);

    cfg.validate();
    return cfg;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path);
    std::ostringstream buffer;
    buffer << f.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace radpipe
