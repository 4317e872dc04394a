#pragma once

#include <string>
#include <vector>

#include "radpipe/feature_vector.hpp"

namespace radpipe {

// Writes the feature table as CSV: header "case_id,label," followed by the
// 107 canonical feature names, one row per record sorted by case_id, reals
// with 10 significant digits. Every record must carry the full canonical
// feature set.
void save_features(const std::vector<CaseRecord>& records, const std::string& path);

// Reads a CSV produced by save_features (or matching its schema exactly).
std::vector<CaseRecord> load_features(const std::string& path);

}  // namespace radpipe
