#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gtdmine/dataset.hpp"
#include "gtdmine/encoding.hpp"

namespace gtdmine {

struct RowIssue {
    std::size_t row = 0;   // 1-based data row, header excluded
    std::size_t line = 0;  // physical line in the file
    std::string column;
    std::string cell;
    std::string reason;
};

struct LoadOptions {
    /// Throw RowError on the first rejected row instead of collecting it.
    bool strict = false;
};

struct LoadResult {
    Dataset dataset;
    std::vector<RowIssue> rejected;
};

/// Encodes a raw incident CSV. Empty cells take the "U" code; rows whose
/// class label, year, region or coordinates cannot be mapped are rejected
/// and reported, and the remaining rows keep their file order.
LoadResult read_csv(std::istream& in, const AttributeSchema& schema, const EncodingTable& table,
                    const LoadOptions& options = {});
LoadResult load_csv(const std::string& path, const AttributeSchema& schema,
                    const EncodingTable& table, const LoadOptions& options = {});

std::string describe(const RowIssue& issue);

}  // namespace gtdmine
