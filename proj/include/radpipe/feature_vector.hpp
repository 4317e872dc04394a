#pragma once

#include <optional>
#include <string>
#include <vector>

namespace radpipe {

// Ordered list of named real-valued features. Order is significant: the
// full radiomics vector always uses the canonical 107-name order.
struct FeatureVector {
    std::vector<std::string> names;
    std::vector<double> values;

    std::size_t size() const { return names.size(); }
    void push(std::string name, double value) {
        names.push_back(std::move(name));
        values.push_back(value);
    }
    // Linear lookup; feature vectors are small.
    double at(const std::string& name) const;
    bool same_schema(const FeatureVector& other) const { return names == other.names; }
};

struct CaseRecord {
    std::string case_id;
    int label = 0;  // 1 = edema-positive
    std::optional<FeatureVector> features;
};

// The frozen canonical order of the 107 radiomics feature names:
// firstorder (18), shape (14), glcm (24), glrlm (16), glszm (16),
// ngtdm (5), gldm (14).
const std::vector<std::string>& canonical_feature_names();

}  // namespace radpipe
