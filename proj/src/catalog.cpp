#include "cartan/catalog.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cartan {

const std::vector<CatalogEntry>& builtin_catalog() {
  static const std::vector<CatalogEntry> entries{
      {"minkowski", R"(name minkowski
coordinates t x y z
signature +---
point 0 0 0 0
g[t,t] = 1
g[x,x] = -1
g[y,y] = -1
g[z,z] = -1
)"},
      {"rindler-chart", R"(name rindler-chart
coordinates t x y z
signature +---
domain x = (0.001, inf)
point 0 1 0 0
g[t,t] = x^2
g[x,x] = -1
g[y,y] = -1
g[z,z] = -1
)"},
      {"schwarzschild", R"(name schwarzschild
coordinates t r theta phi
signature +---
param M = 1
domain r = (2.001, 1e6)
domain theta = (0.001, 3.141)
point 0 6 pi/2 0
g[t,t]         = 1 - 2*M/r
g[r,r]         = -1/(1 - 2*M/r)
g[theta,theta] = -r^2
g[phi,phi]     = -r^2*sin(theta)^2
)"},
      {"flrw-power-law", R"(name flrw-power-law
coordinates t x y z
signature +---
domain t = (0.001, inf)
point 1 0 0 0
g[t,t] = 1
g[x,x] = -t^(4/3)
g[y,y] = -t^(4/3)
g[z,z] = -t^(4/3)
)"},
      {"sphere2", R"(name sphere2
coordinates theta phi
signature ++
domain theta = (-6.3, 6.3)
point pi/3 0
g[theta,theta] = 1
g[phi,phi]     = sin(theta)^2
)"},
      {"sphere2-teleparallel", R"(name sphere2-teleparallel
coordinates theta phi
signature ++
domain theta = (0.001, 3.141)
point pi/3 0
g[theta,theta] = 1
g[phi,phi]     = sin(theta)^2
e[0,theta] = 1
e[1,phi]   = 1/sin(theta)
)"},
      {"minkowski-antisymmetric-torsion", R"(name minkowski-antisymmetric-torsion
coordinates t x y z
signature +---
point 0 0 0 0
g[t,t] = 1
g[x,x] = -1
g[y,y] = -1
g[z,z] = -1
T[x,y,z] = 0.3
T[y,z,x] = 0.3
T[z,x,y] = 0.3
)"},
      {"minkowski-skew-torsion", R"(name minkowski-skew-torsion
coordinates t x y z
signature +---
point 0 0 0 0
g[t,t] = 1
g[x,x] = -1
g[y,y] = -1
g[z,z] = -1
T[x,t,x] = 0.2
)"},
  };
  return entries;
}

std::vector<CatalogEntry> active_catalog() {
  const char* dir = std::getenv("CARTAN_FORGE_CATALOG_DIR");
  if (!dir || !*dir) return builtin_catalog();

  namespace fs = std::filesystem;
  if (!fs::is_directory(dir))
    throw ValidationError(std::string("CARTAN_FORGE_CATALOG_DIR is not a directory: ") +
                          dir);
  std::vector<CatalogEntry> entries;
  for (const auto& item : fs::directory_iterator(dir)) {
    if (!item.is_regular_file() || item.path().extension() != ".st") continue;
    std::ifstream in(item.path());
    std::ostringstream text;
    text << in.rdbuf();
    entries.push_back({item.path().stem().string(), text.str()});
  }
  std::sort(entries.begin(), entries.end(),
            [](const CatalogEntry& a, const CatalogEntry& b) { return a.key < b.key; });
  return entries;
}

CatalogEntry find_catalog_entry(const std::string& key) {
  std::string known;
  for (const CatalogEntry& e : active_catalog()) {
    if (e.key == key) return e;
    known += known.empty() ? e.key : ", " + e.key;
  }
  throw ValidationError("unknown catalog entry '" + key + "' (available: " + known +
                        ")");
}

}  // namespace cartan
