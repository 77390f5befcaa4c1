// Built-in spacetime documents shipped with the tool, addressable by key.
#pragma once

#include <string>
#include <vector>

#include "cartan/spacetime.hpp"

namespace cartan {

struct CatalogEntry {
  std::string key;
  std::string document;  // spacetime document source text
};

// Entries compiled into the library.
const std::vector<CatalogEntry>& builtin_catalog();

// The catalog in effect: the builtin entries, unless CARTAN_FORGE_CATALOG_DIR
// points at a directory of .st files (keys are the file stems, sorted).
std::vector<CatalogEntry> active_catalog();

// Looks up a key in the active catalog; throws ValidationError naming the
// available keys when absent.
CatalogEntry find_catalog_entry(const std::string& key);

}  // namespace cartan
