#include "radpipe/feature_vector.hpp"

#include "radpipe/error.hpp"

namespace radpipe {

double FeatureVector::at(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return values[i];
    throw SchemaError("feature not present: " + name);
}

const std::vector<std::string>& canonical_feature_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        v.reserve(107);
        auto add = [&v](const char* prefix, std::initializer_list<const char*> items) {
            for (const char* item : items) v.push_back(std::string(prefix) + item);
        };
        add("firstorder_",
            {"Energy", "TotalEnergy", "Entropy", "Minimum", "10thPercentile", "90thPercentile",
             "Maximum", "Mean", "Median", "InterquartileRange", "Range", "MeanAbsoluteDeviation",
             "RobustMeanAbsoluteDeviation", "RootMeanSquared", "Skewness", "Kurtosis", "Variance",
             "Uniformity"});
        add("shape_",
            {"MeshVolume", "VoxelVolume", "SurfaceArea", "SurfaceVolumeRatio", "Sphericity",
             "MajorAxisLength", "MinorAxisLength", "LeastAxisLength", "Elongation", "Flatness",
             "Maximum3DDiameter", "Maximum2DDiameterSlice", "Maximum2DDiameterColumn",
             "Maximum2DDiameterRow"});
        add("glcm_",
            {"Autocorrelation", "JointAverage", "ClusterProminence", "ClusterShade",
             "ClusterTendency", "Contrast", "Correlation", "DifferenceAverage", "DifferenceEntropy",
             "DifferenceVariance", "JointEnergy", "JointEntropy", "Imc1", "Imc2", "Idm", "Idmn",
             "Id", "Idn", "InverseVariance", "MaximumProbability", "SumAverage", "SumEntropy",
             "SumSquares", "Mcc"});
        add("glrlm_",
            {"ShortRunEmphasis", "LongRunEmphasis", "GrayLevelNonUniformity",
             "GrayLevelNonUniformityNormalized", "RunLengthNonUniformity",
             "RunLengthNonUniformityNormalized", "RunPercentage", "GrayLevelVariance",
             "RunVariance", "RunEntropy", "LowGrayLevelRunEmphasis", "HighGrayLevelRunEmphasis",
             "ShortRunLowGrayLevelEmphasis", "ShortRunHighGrayLevelEmphasis",
             "LongRunLowGrayLevelEmphasis", "LongRunHighGrayLevelEmphasis"});
        add("glszm_",
            {"SmallAreaEmphasis", "LargeAreaEmphasis", "GrayLevelNonUniformity",
             "GrayLevelNonUniformityNormalized", "SizeZoneNonUniformity",
             "SizeZoneNonUniformityNormalized", "ZonePercentage", "GrayLevelVariance",
             "ZoneVariance", "ZoneEntropy", "LowGrayLevelZoneEmphasis", "HighGrayLevelZoneEmphasis",
             "SmallAreaLowGrayLevelEmphasis", "SmallAreaHighGrayLevelEmphasis",
             "LargeAreaLowGrayLevelEmphasis", "LargeAreaHighGrayLevelEmphasis"});
        add("ngtdm_", {"Coarseness", "Contrast", "Busyness", "Complexity", "Strength"});
        add("gldm_",
            {"SmallDependenceEmphasis", "LargeDependenceEmphasis", "GrayLevelNonUniformity",
             "DependenceNonUniformity", "DependenceNonUniformityNormalized", "GrayLevelVariance",
             "DependenceVariance", "DependenceEntropy", "LowGrayLevelEmphasis",
             "HighGrayLevelEmphasis", "SmallDependenceLowGrayLevelEmphasis",
             "SmallDependenceHighGrayLevelEmphasis", "LargeDependenceLowGrayLevelEmphasis",
             "LargeDependenceHighGrayLevelEmphasis"});
        return v;
    }();
    return names;
}

}  // namespace radpipe
