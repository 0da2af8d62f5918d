#include "gencalc/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace gencalc {
namespace {

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Json optional_number(const std::optional<double>& v) {
  if (!v) return nullptr;
  return number(*v);
}

std::string format(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw std::invalid_argument("bad number in CSV: '" + s + "'");
  return v;
}

Json h1_json(const H1Evidence& e) {
  Json samples = Json::array();
  for (const auto& s : e.samples) {
    samples.push_back({{"t", s.t}, {"eps", s.eps}, {"h", optional_number(s.h)},
                       {"abs_h", s.h ? Json(std::abs(*s.h)) : Json(nullptr)}});
  }
  Json out = {{"holds", e.holds}, {"samples", samples}};
  if (e.failure) out["failure"] = {{"t", e.failure->t}, {"eps", e.failure->eps}};
  if (!e.reason.empty()) out["reason"] = e.reason;
  return out;
}

}  // namespace

Json to_json(const DerivativeResult& r) {
  Json out = {{"outcome", outcome_name(r.outcome)},
              {"value", number(r.value)},
              {"error", number(r.estimated_error)},
              {"method", method_name(r.method)}};
  if (r.right) out["right"] = number(*r.right);
  if (r.left) out["left"] = number(*r.left);
  return out;
}

Json to_json(const HypothesisReport& r) {
  return {{"h1_plus", h1_json(r.h1_plus)},
          {"h1_minus", h1_json(r.h1_minus)},
          {"h2", {{"holds", r.h2.holds}, {"integral", number(r.h2.integral)}, {"error", number(r.h2.error)}}},
          {"continuity_at_zero", r.continuity_at_zero},
          {"eps_over_h_limit", r.eps_over_h_limit}};
}

Json to_json(const Spectrum& s) {
  return {{"lambda_plus", s.lambda_plus},
          {"lambda_minus", s.lambda_minus},
          {"oscillation_plus", s.oscillation_plus},
          {"oscillation_minus", s.oscillation_minus},
          {"asymptotic", {{"plus", optional_number(s.asymptotic_plus)}, {"minus", optional_number(s.asymptotic_minus)}}},
          {"weyl", {{"plus", optional_number(s.weyl_plus)}, {"minus", optional_number(s.weyl_minus)}}}};
}

Json to_json(const AlphaQuantity& q) {
  return {{"magnitude", number(q.magnitude)},
          {"unit_string", unit_string(q)},
          {"length_power", q.length_power},
          {"time_power", q.time_power},
          {"alpha", q.alpha}};
}

void write_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,tau";
  for (const auto& l : traj.labels) out << ',' << l;
  out << '\n';
  for (const auto& s : traj.samples) {
    out << format(s.t) << ',' << format(s.tau);
    for (double v : s.state) out << ',' << format(v);
    out << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty trajectory CSV");
  const auto header = split(line);
  if (header.size() < 2 || header[0] != "t" || header[1] != "tau") {
    throw std::invalid_argument("trajectory CSV must start with t,tau");
  }
  Trajectory traj;
  traj.labels.assign(header.begin() + 2, header.end());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) throw std::invalid_argument("ragged trajectory CSV row");
    TrajectorySample s{parse(cells[0]), parse(cells[1]), {}};
    for (std::size_t i = 2; i < cells.size(); ++i) s.state.push_back(parse(cells[i]));
    traj.samples.push_back(std::move(s));
  }
  traj.check();
  return traj;
}

void write_csv(std::ostream& out, const Spectrum& s) {
  out << "kind,index,value,count\n";
  for (std::size_t i = 0; i < s.lambda_plus.size(); ++i) {
    out << "plus," << i + 1 << ',' << format(s.lambda_plus[i]) << ',' << s.oscillation_plus.at(i) << '\n';
  }
  for (std::size_t i = 0; i < s.lambda_minus.size(); ++i) {
    out << "minus," << i + 1 << ',' << format(s.lambda_minus[i]) << ',' << s.oscillation_minus.at(i) << '\n';
  }
  auto constant = [&](const char* kind, const std::optional<double>& v) {
    if (v) out << kind << ",0," << format(*v) << ",0\n";
  };
  constant("asymptotic_plus", s.asymptotic_plus);
  constant("asymptotic_minus", s.asymptotic_minus);
  constant("weyl_plus", s.weyl_plus);
  constant("weyl_minus", s.weyl_minus);
}

Spectrum read_spectrum_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "kind,index,value,count") {
    throw std::invalid_argument("spectrum CSV must start with kind,index,value,count");
  }
  Spectrum s;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 4) throw std::invalid_argument("ragged spectrum CSV row");
    const auto& kind = cells[0];
    const double value = parse(cells[2]);
    const int count = static_cast<int>(parse(cells[3]));
    if (kind == "plus") {
      s.lambda_plus.push_back(value);
      s.oscillation_plus.push_back(count);
    } else if (kind == "minus") {
      s.lambda_minus.push_back(value);
      s.oscillation_minus.push_back(count);
    } else if (kind == "asymptotic_plus") s.asymptotic_plus = value;
    else if (kind == "asymptotic_minus") s.asymptotic_minus = value;
    else if (kind == "weyl_plus") s.weyl_plus = value;
    else if (kind == "weyl_minus") s.weyl_minus = value;
    else throw std::invalid_argument("unknown spectrum row kind '" + kind + "'");
  }
  return s;
}

void write_csv(std::ostream& out, const std::vector<EigenfunctionSample>& samples) {
  out << "t,tau,y,Dy,dy_dtau\n";
  for (const auto& s : samples) {
    out << format(s.t) << ',' << format(s.tau) << ',' << format(s.y) << ',' << format(s.Dy) << ','
        << format(s.dtau) << '\n';
  }
}

std::vector<EigenfunctionSample> read_eigenfunction_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "t,tau,y,Dy,dy_dtau") {
    throw std::invalid_argument("eigenfunction CSV must start with t,tau,y,Dy,dy_dtau");
  }
  std::vector<EigenfunctionSample> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != 5) throw std::invalid_argument("ragged eigenfunction CSV row");
    out.push_back({parse(c[1]), parse(c[0]), parse(c[2]), parse(c[3]), parse(c[4])});
  }
  return out;
}

}  // namespace gencalc
