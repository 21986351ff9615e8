#pragma once

#include <string>

#include <json.hpp>

#include "dtoda/coords.hpp"
#include "dtoda/grunsky.hpp"
#include "dtoda/tau.hpp"

namespace dtoda {

using json = nlohmann::ordered_json;

// CircleHomeo input document:
//   {"type":"mobius","a":[re,im],"alpha":x}
//   {"type":"fourier","coeffs":[[n,re,im],...]}
//   {"type":"perturbed_mobius","base":{...},"modes":[[n,re,im],...]}
CircleHomeo parse_gamma(const json& doc, int N, int M);

// Pair input document:
//   {"type":"pair","f":[[n,re,im],...],"g_lead":[re,im],"g":[[n,re,im],...]}
// f entries are a_n for n >= 1; g entries are b_n for n >= 0.
UnivalentPair parse_pair(const json& doc, int N);

bool looks_like_pair(const json& doc);

json pair_to_json(const UnivalentPair& pair);
json welding_to_json(const WeldingSolution& sol);
json coords_to_json(const CoordinateVector& c);
json grunsky_to_json(const GrunskyMatrix& m);
json free_energy_to_json(const FreeEnergyRecord& rec);

std::string format_float(double x);  // fixed 17 significant digits

std::string coords_to_csv(const CoordinateVector& c);
std::string grunsky_to_csv(const GrunskyMatrix& m);
std::string curve_to_csv(const std::vector<cdouble>& samples);

}  // namespace dtoda
