#pragma once

#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "gencalc/derivative.hpp"
#include "gencalc/mechanics.hpp"
#include "gencalc/pmap.hpp"
#include "gencalc/sturm_liouville.hpp"
#include "gencalc/units.hpp"

namespace gencalc {

using Json = nlohmann::ordered_json;

Json to_json(const DerivativeResult& r);
Json to_json(const HypothesisReport& r);
Json to_json(const Spectrum& s);
Json to_json(const AlphaQuantity& q);

/// Header "t,tau,<labels>", one row per sample, 17 significant digits.
void write_csv(std::ostream& out, const Trajectory& traj);
Trajectory read_trajectory_csv(std::istream& in);

/// Rows "kind,index,value,count" with kind in plus, minus, asymptotic_plus,
/// asymptotic_minus, weyl_plus, weyl_minus.
void write_csv(std::ostream& out, const Spectrum& s);
Spectrum read_spectrum_csv(std::istream& in);

/// Header "t,tau,y,Dy,dy_dtau".
void write_csv(std::ostream& out, const std::vector<EigenfunctionSample>& samples);
std::vector<EigenfunctionSample> read_eigenfunction_csv(std::istream& in);

}  // namespace gencalc
