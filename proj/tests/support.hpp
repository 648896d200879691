#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gtdmine/rng.hpp"
#include "gtdmine/synthetic.hpp"

namespace testsupport {

inline std::string data_file(const std::string& name) { return std::string(GTDMINE_DATA_DIR) + "/" + name; }
inline std::string golden_file(const std::string& name) { return std::string(GTDMINE_GOLDEN_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// Fresh empty directory under the system temp dir.
inline std::string scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("gtdmine-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

/// Uniform class-conditionals over per-attribute code counts in [2, max_codes].
inline gtdmine::SyntheticSpec random_spec(gtdmine::Rng& rng, std::size_t attributes, std::size_t max_codes) {
    gtdmine::SyntheticSpec spec;
    spec.class_weights = {0.3, 0.4, 0.3};
    for (std::size_t a = 0; a < attributes; ++a) {
        spec.attribute_names.push_back("a" + std::to_string(a));
        spec.code_counts.push_back(2 + rng.uniform_index(max_codes - 1));
    }
    for (auto& cond : spec.conditionals) {
        for (auto m : spec.code_counts) cond.push_back(std::vector<double>(m, 1.0 / static_cast<double>(m)));
    }
    return spec;
}

/// Relabels every record by a random function of its code vector.
inline gtdmine::Dataset make_consistent(const gtdmine::Dataset& data, gtdmine::Rng& rng) {
    std::map<std::vector<gtdmine::Code>, gtdmine::ClassLabel> label_of;
    auto records = data.records();
    for (auto& r : records) {
        auto it = label_of.find(r.codes);
        if (it == label_of.end()) it = label_of.emplace(r.codes, gtdmine::label_at(rng.uniform_index(3))).first;
        r.label = it->second;
    }
    return gtdmine::Dataset(data.schema(), std::move(records));
}

/// Noisy three-class data: each class mostly draws from its own block.
inline gtdmine::SyntheticSpec noisy_spec(std::size_t attributes, std::size_t codes_per_class, double purity) {
    auto spec = gtdmine::separable_spec(attributes, codes_per_class, {0.25, 0.45, 0.30});
    for (auto& cond : spec.conditionals) {
        for (auto& row : cond) {
            const double u = 1.0 / static_cast<double>(row.size());
            for (auto& p : row) p = purity * p + (1 - purity) * u;
        }
    }
    return spec;
}

/// Small categorical dataset from literal rows; every attribute also gets "U".
inline gtdmine::Dataset toy_dataset(const std::vector<std::pair<std::string, std::vector<std::string>>>& attrs,
                                    const std::vector<std::vector<std::string>>& rows,
                                    const std::vector<gtdmine::ClassLabel>& labels) {
    std::vector<gtdmine::Attribute> list;
    for (const auto& [name, codes] : attrs) {
        gtdmine::Attribute a;
        a.name = name;
        a.column = name;
        a.codes = codes;
        a.codes.emplace_back(gtdmine::kUnknownCode);
        list.push_back(std::move(a));
    }
    gtdmine::Attribute cls;
    cls.name = "class";
    cls.kind = gtdmine::AttributeKind::Class;
    cls.column = "class";
    list.push_back(std::move(cls));
    gtdmine::AttributeSchema schema(std::move(list));
    std::vector<gtdmine::EncodedRecord> records;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        gtdmine::EncodedRecord r;
        for (std::size_t f = 0; f < rows[i].size(); ++f) r.codes.push_back(*schema.code_index(f, rows[i][f]));
        r.label = labels[i];
        records.push_back(std::move(r));
    }
    return gtdmine::Dataset(std::move(schema), std::move(records));
}

}  // namespace testsupport
