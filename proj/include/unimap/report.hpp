#pragma once

// JSON views of the analysis results, shared by the command-line tool and
// the Python bindings. Points are written as [x, y] arrays.

#include <string>

#include "json.hpp"
#include "unimap/bifurcation.hpp"
#include "unimap/conjugacy.hpp"
#include "unimap/dynamics.hpp"
#include "unimap/map.hpp"
#include "unimap/normal_form.hpp"

namespace unimap {

using Json = nlohmann::ordered_json;

Json to_json(Point p);
Json to_json(const Interval& i);
Json to_json(const Rect& r);

Json map_json(const MapSpec& m);
Json to_json(const ValidationReport& r);
Json to_json(const UnipotencyReport& r);
Json normal_form_json(const NormalForm& nf, const Classification& cls);
Json to_json(const FixedPointSet& fs);
Json to_json(const OrbitTrace& tr);
Json to_json(const MaximalInterval& mi);
Json to_json(const PeriodicReport& r);
Json to_json(const DiskReport& r);
Json to_json(const ConjugacyReport& r);
Json conjugacy_json(const ConjugacyMap& h);
Json to_json(const LemmaReport& r);
Json to_json(const SeedOutcome& s);
Json to_json(const StabilityReport& r);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

/// "n,x,y" lines, one per orbit entry, no header.
std::string orbit_csv(const OrbitTrace& tr);

}  // namespace unimap
