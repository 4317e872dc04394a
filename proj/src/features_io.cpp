#include "radpipe/features_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "radpipe/error.hpp"

namespace radpipe {

namespace {

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

}  // namespace

void save_features(const std::vector<CaseRecord>& records, const std::string& path) {
    const auto& canonical = canonical_feature_names();
    for (const auto& r : records) {
        if (!r.features)
            throw SchemaError("record " + r.case_id + " has no feature vector");
        if (r.features->names != canonical)
            throw SchemaError("record " + r.case_id + " does not carry the canonical feature set");
    }

    std::vector<const CaseRecord*> sorted;
    sorted.reserve(records.size());
    for (const auto& r : records) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(),
              [](const CaseRecord* a, const CaseRecord* b) { return a->case_id < b->case_id; });

    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path);
    f << "case_id,label";
    for (const auto& name : canonical) f << ',' << name;
    f << '\n';
    for (const CaseRecord* r : sorted) {
        f << r->case_id << ',' << r->label;
        for (double v : r->features->values) f << ',' << format_real(v);
        f << '\n';
    }
    if (!f) throw IoError("write failed for " + path);
}

std::vector<CaseRecord> load_features(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path);

    std::string line;
    if (!std::getline(f, line)) throw FormatError("feature csv: empty file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto& canonical = canonical_feature_names();
    const auto header = split_csv_line(line);
    if (header.size() != canonical.size() + 2)
        throw SchemaError("feature csv: expected " + std::to_string(canonical.size() + 2) +
                          " columns, got " + std::to_string(header.size()));
    if (header[0] != "case_id" || header[1] != "label")
        throw SchemaError("feature csv: header must start with case_id,label");
    for (std::size_t i = 0; i < canonical.size(); ++i)
        if (header[i + 2] != canonical[i])
            throw SchemaError("feature csv: column " + std::to_string(i + 2) + " is \"" +
                              header[i + 2] + "\", expected \"" + canonical[i] + "\"");

    std::vector<CaseRecord> records;
    std::set<std::string> seen_ids;
    std::size_t line_no = 1;
    while (std::getline(f, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw FormatError("feature csv: line " + std::to_string(line_no) + " has " +
                              std::to_string(cells.size()) + " cells");
        CaseRecord rec;
        rec.case_id = cells[0];
        if (!seen_ids.insert(rec.case_id).second)
            throw FormatError("feature csv: duplicate case_id " + rec.case_id);
        if (cells[1] != "0" && cells[1] != "1")
            throw FormatError("feature csv: line " + std::to_string(line_no) +
                              " label must be 0 or 1, got \"" + cells[1] + "\"");
        rec.label = cells[1] == "1" ? 1 : 0;
        FeatureVector fv;
        fv.names = canonical;
        fv.values.reserve(canonical.size());
        for (std::size_t i = 2; i < cells.size(); ++i) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(cells[i], &used);
            } catch (const std::exception&) {
                throw FormatError("feature csv: non-numeric cell \"" + cells[i] + "\" at line " +
                                  std::to_string(line_no));
            }
            if (used != cells[i].size())
                throw FormatError("feature csv: non-numeric cell \"" + cells[i] + "\" at line " +
                                  std::to_string(line_no));
            fv.values.push_back(v);
        }
        rec.features = std::move(fv);
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace radpipe
