#include <cmath>

#include "radpipe/error.hpp"
#include "radpipe/radiomics.hpp"

namespace radpipe {

FeatureVector extract_all(const Volume& v, const Mask& m, const TextureConfig& c) {
    check_aligned(v.grid, m.grid);
    if (m.foreground_count() == 0) throw EmptyMaskError("extract_all: empty mask");

    const DiscretizedRoi d = discretize(v, m, c);

    FeatureVector out;
    out.names = canonical_feature_names();
    out.values.reserve(out.names.size());
    const auto append = [&out](const std::vector<double>& values) {
        out.values.insert(out.values.end(), values.begin(), values.end());
    };
    append(first_order_features(v, m, c));
    append(shape_features(m));
    append(glcm_features(d, c));
    append(glrlm_features(d));
    append(glszm_features(d));
    append(ngtdm_features(d, c));
    append(gldm_features(d, c));

    if (out.values.size() != out.names.size())
        throw Error("feature families produced " + std::to_string(out.values.size()) +
                    " values, expected " + std::to_string(out.names.size()));
    for (std::size_t i = 0; i < out.values.size(); ++i)
        if (!std::isfinite(out.values[i]))
            throw Error("feature " + out.names[i] + " is not finite");
    return out;
}

}  // namespace radpipe
