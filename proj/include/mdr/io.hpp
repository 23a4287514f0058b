#pragma once

// JSON ingestion for joint pmf documents and locale-independent number
// formatting shared by every CLI output path.

#include <json.hpp>
#include <string>
#include <vector>

#include "mdr/cms.hpp"
#include "mdr/pmf.hpp"

namespace mdr::io {

struct PmfDocument {
  JointPmf pmf;
  std::vector<ReconstructionMap> reconstructions;
};

// Parse {"L": int, "roles": [{"kind": "X"|"V"|"U", "set": [channels]}, ...],
// "alphabets": [int, ...], "probs": [flat row-major doubles],
// "reconstructions": [...] } (last key optional).  Throws std::domain_error
// with a descriptive message on malformed documents.
PmfDocument parse_pmf_document(const nlohmann::json& doc);
PmfDocument load_pmf_file(const std::string& path);

// 12 significant digits, locale-independent ("%.12g" under the C locale; the
// library never calls setlocale).
std::string fmt12(double v);
// The double nearest the fmt12 representation: JSON documents carry numbers
// rounded through this so that emitted digits match the CSV surface.
double round12(double v);

}  // namespace mdr::io
