#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace findex {

// Synthetic 20-index panel used as the bundled fixture: four regional blocks
// of five indices driven by one global and one regional factor, a binomial-
// cascade volatility envelope on two indices per region, and a sprinkle of
// market closures (two days above the removal threshold, ten below it).
// Output is a wide CSV with blank cells on closed days; fully determined by
// `seed`.
void generate_demo_panel(const std::string& csv_path, uint64_t seed);

// Region tag ("ASIA", "EURO", "AMER", "MEAF") for each demo label, label order.
std::vector<std::string> demo_regions();
std::vector<std::string> demo_labels();

}  // namespace findex
