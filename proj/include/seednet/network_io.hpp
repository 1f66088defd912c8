#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "seednet/network.hpp"

namespace seednet {

// Delimited-text schemas.
//
// individuals file: header `person_id,household_id,village_id,lat,lon`
//   (the lat/lon columns may be omitted entirely, or left empty per row).
// edges file: header `village_id,person_a,person_b`.
// UTF-8, comma-delimited, one record per line.

/// Loads every village found in the two sources, grouped by village_id in
/// order of first appearance. Malformed rows raise DataError with the file
/// label and 1-based row number; edges naming unknown persons raise DataError
/// with the offending id.
std::vector<VillageNetwork> load_villages(std::istream& individuals, std::istream& edges,
                                          const std::string& individuals_label = "individuals",
                                          const std::string& edges_label = "edges");

/// Loads a single village. `village_id` selects one village from multi-village
/// sources; when empty, the sources must contain exactly one village.
VillageNetwork load_village(std::istream& individuals, std::istream& edges,
                            const std::string& village_id = "",
                            const std::string& individuals_label = "individuals",
                            const std::string& edges_label = "edges");

/// Convenience wrappers that open the named files (DataError when missing).
std::vector<VillageNetwork> load_villages_from_files(const std::string& individuals_path,
                                                     const std::string& edges_path);
VillageNetwork load_village_from_files(const std::string& individuals_path,
                                       const std::string& edges_path,
                                       const std::string& village_id = "");

/// Writes villages back out in the input schemas (used by `gen`).
void write_individuals_csv(std::ostream& out, const std::vector<VillageNetwork>& villages);
void write_edges_csv(std::ostream& out, const std::vector<VillageNetwork>& villages);

} // namespace seednet
