#include "mdr/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace mdr::io {

namespace {

using nlohmann::json;

SubsetId parse_subset(const json& arr, int channel_count, const char* what) {
  if (!arr.is_array() || arr.empty()) {
    throw std::domain_error(std::string(what) + " must be a nonempty array of channels");
  }
  std::uint32_t mask = 0;
  for (const auto& v : arr) {
    if (!v.is_number_integer()) {
      throw std::domain_error(std::string(what) + " must contain integer channels");
    }
    const int ch = v.get<int>();
    if (ch < 1 || ch > channel_count) {
      throw std::domain_error(std::string(what) + " channel " + std::to_string(ch) +
                              " outside {1.." + std::to_string(channel_count) + "}");
    }
    mask |= 1u << (ch - 1);
  }
  return SubsetId::from_mask(mask, channel_count);
}

}  // namespace

PmfDocument parse_pmf_document(const nlohmann::json& doc) {
  try {
    if (!doc.is_object()) throw std::domain_error("pmf document must be a JSON object");
    const int channel_count = doc.at("L").get<int>();

    std::vector<VariableRole> roles;
    for (const auto& r : doc.at("roles")) {
      const std::string kind = r.at("kind").get<std::string>();
      if (kind == "X") {
        roles.push_back(VariableRole::source_role());
      } else if (kind == "V") {
        roles.push_back(VariableRole::shared_role(
            parse_subset(r.at("set"), channel_count, "shared codeword set")));
      } else if (kind == "U") {
        roles.push_back(VariableRole::layer_role(
            parse_subset(r.at("set"), channel_count, "layer codeword set")));
      } else {
        throw std::domain_error("role kind must be one of \"X\", \"V\", \"U\", got \"" +
                                kind + "\"");
      }
    }
    std::vector<int> alphabets = doc.at("alphabets").get<std::vector<int>>();
    std::vector<double> probs = doc.at("probs").get<std::vector<double>>();
    PmfDocument out{JointPmf(channel_count, std::move(roles), std::move(alphabets),
                             std::move(probs)),
                    {}};

    if (doc.contains("reconstructions")) {
      for (const auto& r : doc.at("reconstructions")) {
        ReconstructionMap recon{
            parse_subset(r.at("decoder"), channel_count, "reconstruction decoder"),
            r.at("map").get<std::vector<int>>(),
            r.at("distortion").get<std::vector<std::vector<double>>>()};
        out.reconstructions.push_back(std::move(recon));
      }
    }
    return out;
  } catch (const json::exception& e) {
    throw std::domain_error(std::string("malformed pmf document: ") + e.what());
  }
}

PmfDocument load_pmf_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::domain_error("cannot open pmf file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw std::domain_error(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return parse_pmf_document(doc);
}

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

double round12(double v) {
  return std::strtod(fmt12(v).c_str(), nullptr);
}

}  // namespace mdr::io
