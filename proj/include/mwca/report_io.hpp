#pragma once

#include <string>
#include <vector>

#include "mwca/tensor.hpp"

namespace mwca::io {

/// Shortest exact decimal form of a double (printf %.17g), used for every
/// numeric CSV field so outputs round-trip and are byte-deterministic.
std::string format_full(double v);

/// Mode names may carry spaces or separators; file names keep only
/// [A-Za-z0-9_+-] and replace the rest with '_'.
std::string sanitize_filename(const std::string& name);

/// label column plus one column per component (header label,c1,...,cr).
void write_coordinate_csv(const std::string& path,
                          const std::vector<std::string>& labels,
                          const Matrixd& coords);

void write_sigma_csv(const std::string& path, const Vectord& sigma);

}  // namespace mwca::io
