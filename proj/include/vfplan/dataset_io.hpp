#pragma once

#include <string>
#include <vector>

#include "vfplan/gp.hpp"

namespace vfplan {

/// Serializes a double with 17 significant digits (round-trip exact).
std::string format_g17(double v);

/// Reads a dataset from CSV with header x1,...,xd,y (one fidelity per file).
/// Parse failures throw std::runtime_error carrying the file and line number.
FidelityDataset read_dataset_csv(const std::string& path, Fidelity fidelity);

void write_dataset_csv(const std::string& path, const FidelityDataset& data);

/// Writes a generic CSV: one header row, then rows of preformatted cells.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace vfplan
