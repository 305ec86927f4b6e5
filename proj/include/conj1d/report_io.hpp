#pragma once

#include <string>
#include <vector>

#include "conj1d/identities.hpp"
#include "conj1d/linearize.hpp"
#include "conj1d/normal_forms.hpp"
#include "conj1d/orbits.hpp"

namespace conj1d {

// Shortest round-trip decimal form (std::to_chars); the one float format
// used in every machine-readable output so reruns are byte-identical.
std::string fmt(double v);

std::string fixed_points_csv(const std::vector<FixedPointInfo>& fps);

// itinerary, period, points..., multiplier, exempt-flag, relative-error
std::string law_csv(const LawReport& report);

std::string density_csv(const DensityHistogram& h);

// x, h(x), junction-flag
std::string table_csv(const ConjugacyTable& table);
std::string table_json(const ConjugacyTable& table, const std::vector<SmoothnessReport>& reports);

std::string lemma_report_json(const exact::LemmaSuiteReport& report);

std::string sn_sweep_csv(const std::vector<SNFit>& fits);
std::string pf_sweep_csv(const std::vector<PFFit>& fits);
std::string bc_sweep_csv(const std::vector<BCFit>& fits);

} // namespace conj1d
