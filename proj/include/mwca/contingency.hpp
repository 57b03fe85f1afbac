#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mwca/tensor.hpp"

namespace mwca {

/// Labeled d-way contingency table: nonnegative integer counts (stored as
/// doubles), one name per mode and one label per category.
struct ContingencyTable {
    Tensor<double> counts;
    std::vector<std::string> mode_names;
    std::vector<std::vector<std::string>> labels;

    Index order() const { return counts.order(); }

    /// Enforces the type invariants: matching label lengths, distinct
    /// labels and names, nonnegative integer entries, at least one
    /// positive entry.
    void validate() const;
};

enum class TableFormat { long_csv, dense_json };

std::optional<TableFormat> parse_table_format(const std::string& name);

/// Format by file extension: .csv is the long format, .json the dense one.
TableFormat infer_table_format(const std::string& path);

/// Load a table.
///
/// long-csv: a header row naming the d mode columns plus a final `count`
/// column, then one row per cell; cells not mentioned are zero. Labels are
/// ordered by first appearance unless a sidecar (JSON object mapping mode
/// name to an ordered label list) pins the order; a pinned mode rejects
/// labels outside the sidecar, and sidecar labels missing from the data
/// become empty slices.
///
/// dense-json: an object with `shape`, `mode_names`, `labels` and a flat
/// `values` array ordered with the first index fastest (the same combined
/// index rule the unfolding uses).
ContingencyTable load_table(
    const std::string& path, TableFormat format,
    const std::optional<std::string>& label_order_path = std::nullopt);

void save_table(const ContingencyTable& table, const std::string& path,
                TableFormat format);

struct ZeroSliceReport {
    // dropped[mu-1] lists the removed category labels of mode mu
    std::vector<std::vector<std::string>> dropped;

    bool empty() const {
        for (const auto& d : dropped)
            if (!d.empty()) return false;
        return true;
    }
};

/// Remove every category whose slice is all zero, so the CA marginals are
/// strictly positive afterwards. Errors when nothing is left.
std::pair<ContingencyTable, ZeroSliceReport> drop_zero_slices(
    const ContingencyTable& table);

}  // namespace mwca
