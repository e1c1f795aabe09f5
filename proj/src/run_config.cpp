#include "smm/run_config.hpp"

#include <stdexcept>

#include <json.hpp>

namespace smm {

void RunConfig::validate() const {
  if (arch != "mm" && arch != "smm") {
    throw std::invalid_argument("arch must be \"mm\" or \"smm\"");
  }
  if (width < 1 || width > 30) {
    throw std::invalid_argument("operand width must be in [1, 30]");
  }
  if (trials < 1 || trials > 1000000) {
    throw std::invalid_argument("trials must be in [1, 1000000]");
  }
  if (freq_mhz && !(*freq_mhz > 0)) {
    throw std::invalid_argument("freq_mhz must be positive");
  }
  mxu().validate();
}

MxuConfig RunConfig::mxu() const {
  MxuConfig cfg;
  cfg.family = (arch == "smm") ? MxuFamily::SMM : MxuFamily::MM;
  cfg.r = r;
  cfg.leaf_x = leaf_x;
  cfg.leaf_y = leaf_y;
  cfg.input_width = is_signed ? width : width + 1;
  cfg.q_add_pipeline = q_add_pipeline;
  return cfg;
}

std::pair<int, int> parse_leaf(const std::string& text) {
  const auto sep = text.find('x');
  if (sep == std::string::npos || sep == 0 || sep + 1 >= text.size()) {
    throw std::invalid_argument("leaf geometry must look like \"16x16\"");
  }
  size_t used = 0;
  int x = 0;
  int y = 0;
  try {
    x = std::stoi(text.substr(0, sep), &used);
    if (used != sep) throw std::invalid_argument("");
    y = std::stoi(text.substr(sep + 1), &used);
    if (used != text.size() - sep - 1) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw std::invalid_argument("leaf geometry must look like \"16x16\"");
  }
  if (x < 1 || y < 1) {
    throw std::invalid_argument("leaf geometry must be positive");
  }
  return {x, y};
}

RunConfig run_config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") +
                                e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be an object");

  RunConfig cfg;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "arch") {
        cfg.arch = value.get<std::string>();
      } else if (key == "r") {
        cfg.r = value.get<int>();
      } else if (key == "leaf") {
        std::tie(cfg.leaf_x, cfg.leaf_y) = parse_leaf(value.get<std::string>());
      } else if (key == "width") {
        cfg.width = value.get<int>();
      } else if (key == "signed") {
        cfg.is_signed = value.get<bool>();
      } else if (key == "q_add_pipeline") {
        cfg.q_add_pipeline = value.get<bool>();
      } else if (key == "freq_mhz") {
        if (!value.is_null()) cfg.freq_mhz = value.get<double>();
      } else if (key == "seed") {
        cfg.seed = value.get<uint64_t>();
      } else if (key == "trials") {
        cfg.trials = value.get<int>();
      } else {
        throw std::invalid_argument("unknown config key \"" + key + "\"");
      }
    } catch (const nlohmann::json::exception&) {
      throw std::invalid_argument("config key \"" + key +
                                  "\" has the wrong type");
    }
  }
  cfg.validate();
  return cfg;
}

std::string run_config_to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["arch"] = cfg.arch;
  j["r"] = cfg.r;
  j["leaf"] = std::to_string(cfg.leaf_x) + "x" + std::to_string(cfg.leaf_y);
  j["width"] = cfg.width;
  j["signed"] = cfg.is_signed;
  j["q_add_pipeline"] = cfg.q_add_pipeline;
  if (cfg.freq_mhz) {
    j["freq_mhz"] = *cfg.freq_mhz;
  } else {
    j["freq_mhz"] = nullptr;
  }
  j["seed"] = cfg.seed;
  j["trials"] = cfg.trials;
  return j.dump(2) + "\n";
}

}  // namespace smm
