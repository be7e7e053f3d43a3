#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "degpar/field.hpp"

namespace degpar {

/// %.17g, the round-trip representation used by every CSV writer.
std::string format_number(double v);

/// Header row plus numeric rows.
void write_csv(std::ostream& os, const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

/// Columns x[, y], t, u. Rows are slice-major, spatial index order within a slice.
/// By default only nodes inside the ball mask are written.
void write_field_csv(std::ostream& os, const SpaceTimeField& field, bool domain_only = true);
void write_field_csv(std::ostream& os, const MaskedField& field);

/// Reads a field CSV onto an existing grid; rows whose coordinates are not grid
/// nodes are an error. Nodes without a row stay absent.
MaskedField read_field_csv(std::istream& is, const SpaceTimeGrid& grid, const std::string& source = "<csv>");

/// Reads a field CSV and reconstructs the grid from its coordinates: h and dt from
/// the smallest gaps, the box from the largest |coordinate|, the ball mask from the
/// largest |x|. Every in-domain node must be present.
SpaceTimeField read_field_csv_infer(std::istream& is, const std::string& source = "<csv>");

}  // namespace degpar
